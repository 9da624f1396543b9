#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "lbm/runner.hpp"

namespace {

void print_usage() {
    std::cout <<
        "usage: lbm <train|sample|ablate|oracle> [--config=FILE] [--key=value ...]\n"
        "\n"
        "  train    train a drift model; writes checkpoint, loss CSV and the\n"
        "           resolved config into --out\n"
        "  sample   run inference with --checkpoint; writes outputs and metrics\n"
        "  ablate   sweep one parameter: --sweep=sigma --values=0,0.05,0.1\n"
        "  oracle   closed-form vs Monte-Carlo drift table; optional --checkpoint\n"
        "\n"
        "Config file: key=value lines, '#' comments. Flags override file values.\n"
        "Presets via --preset=NAME expand before any override.\n";
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        print_usage();
        return 1;
    }
    const std::string command = argv[1];
    if (command == "--help" || command == "-h" || command == "help") {
        print_usage();
        return 0;
    }

    std::vector<std::string> args(argv + 2, argv + argc);
    lbm::RunConfig cfg;
    try {
        cfg = lbm::RunConfig::resolve(lbm::parse_flags(args));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (command == "train") {
            lbm::run_train(cfg);
        } else if (command == "sample") {
            lbm::run_sample(cfg);
        } else if (command == "ablate") {
            lbm::run_ablation(cfg);
        } else if (command == "oracle") {
            lbm::run_oracle_check(cfg);
        } else {
            std::cerr << "error: unknown command '" << command << "'\n";
            print_usage();
            return 1;
        }
    } catch (const lbm::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
