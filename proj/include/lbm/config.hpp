#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "lbm/train.hpp"

namespace lbm {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Full experiment description. Resolution order: defaults, then preset,
/// then config file, then command-line overrides.
struct RunConfig {
    std::string task = "gauss1d:0,1,2,1";
    std::string codec = "identity";
    std::vector<int> hidden = {128, 128};
    TrainConfig train;
    int steps = 4;
    std::uint64_t sample_seed = 0;  // solver noise; defaults to train.seed
    std::int64_t test_batch = 2000;
    std::string out_dir = "out";
    std::string checkpoint;

    // ablate
    std::string sweep;
    std::vector<std::string> sweep_values;

    // oracle
    std::string oracle_spec = "0,1,2,1,0.1";
    std::int64_t oracle_n = 1000000;
    int oracle_bins = 17;

    /// Applies preset expansion and field parsing; throws ConfigError with
    /// the offending key on any failure.
    static RunConfig resolve(const std::map<std::string, std::string>& kv);

    /// Fully resolved key=value map; feeding it back through resolve()
    /// reproduces this config exactly.
    std::map<std::string, std::string> echo() const;
};

/// Flat key=value lines, '#' comments, blank lines ignored.
std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path);

/// --key=value arguments; "--config=FILE" merges the file first.
std::map<std::string, std::string> parse_flags(const std::vector<std::string>& args);

const std::map<std::string, std::map<std::string, std::string>>& presets();

void write_config_echo(const std::filesystem::path& path, const RunConfig& cfg);

}  // namespace lbm
