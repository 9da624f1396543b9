#include "lbm/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "lbm/data.hpp"
#include "lbm/oracle.hpp"

namespace lbm {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size())
        throw ConfigError("config: cannot parse number for '" + key + "': '" + value + "'");
    return v;
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    if (v != std::floor(v))
        throw ConfigError("config: '" + key + "' must be an integer, got '" + value + "'");
    return static_cast<std::int64_t>(v);
}

std::vector<std::string> split_commas(const std::string& value) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= value.size()) {
        const auto comma = value.find(',', pos);
        out.push_back(value.substr(pos, comma == std::string::npos ? std::string::npos
                                                                   : comma - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::string format_double(double v) {
    char buf[64];
    for (int prec = 12; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string pixel_loss_name(PixelLossKind kind) {
    switch (kind) {
        case PixelLossKind::None: return "none";
        case PixelLossKind::L1: return "l1";
        case PixelLossKind::L2: return "l2";
    }
    return "none";
}

}  // namespace

const std::map<std::string, std::map<std::string, std::string>>& presets() {
    static const std::map<std::string, std::map<std::string, std::string>> table = {
        {"object-removal-analog",
         {{"task", "inpaint16"},
          {"codec", "pool:2"},
          {"sigma", "0.05"},
          {"lambda", "10"},
          {"pixel_loss", "l2"},
          {"timesteps", "discrete:4"}}},
        {"depth-analog",
         {{"task", "inpaint16"},
          {"codec", "pool:2"},
          {"sigma", "0.005"},
          {"lambda", "50"},
          {"pixel_loss", "l2"},
          {"timesteps", "weighted:0@0.9,0.25@0.025,0.5@0.05,0.75@0.025"}}},
        {"normal-analog",
         {{"task", "inpaint16"},
          {"codec", "pool:2"},
          {"sigma", "0.1"},
          {"lambda", "50"},
          {"pixel_loss", "l1"},
          {"timesteps", "weighted:0@0.8,0.25@0.05,0.5@0.1,0.75@0.05"}}},
        {"relight-analog",
         {{"task", "shadow12"},
          {"codec", "pool:2"},
          {"sigma", "0.01"},
          {"lambda", "10"},
          {"pixel_loss", "l2"},
          {"timesteps", "discrete:4"}}},
    };
    return table;
}

RunConfig RunConfig::resolve(const std::map<std::string, std::string>& kv) {
    std::map<std::string, std::string> merged;
    if (auto it = kv.find("preset"); it != kv.end()) {
        const auto& table = presets();
        const auto preset = table.find(it->second);
        if (preset == table.end()) {
            std::string names;
            for (const auto& [name, _] : table) names += (names.empty() ? "" : ", ") + name;
            throw ConfigError("config: unknown preset '" + it->second +
                              "'; available presets: " + names);
        }
        merged = preset->second;
    }
    for (const auto& [key, value] : kv)
        if (key != "preset") merged[key] = value;

    RunConfig cfg;
    for (const auto& [key, value] : merged) {
        try {
            if (key == "task") {
                cfg.task = value;
                make_task(value);  // validate
            } else if (key == "codec") {
                cfg.codec = value;
                Codec::parse(value);
            } else if (key == "hidden") {
                cfg.hidden.clear();
                for (const auto& item : split_commas(value))
                    cfg.hidden.push_back(static_cast<int>(parse_int("hidden", item)));
                if (cfg.hidden.empty()) throw ConfigError("config: 'hidden' must list widths");
            } else if (key == "sigma") {
                cfg.train.sigma = SigmaParam(static_cast<float>(parse_double(key, value)));
            } else if (key == "lambda") {
                cfg.train.lambda = parse_double(key, value);
                if (cfg.train.lambda < 0) throw ConfigError("config: lambda must be >= 0");
            } else if (key == "pixel_loss") {
                if (value == "none") cfg.train.pixel_loss = PixelLossKind::None;
                else if (value == "l1" || value == "L1") cfg.train.pixel_loss = PixelLossKind::L1;
                else if (value == "l2" || value == "L2") cfg.train.pixel_loss = PixelLossKind::L2;
                else throw ConfigError("config: pixel_loss must be none, l1 or l2");
            } else if (key == "crop_threshold") {
                cfg.train.crop.threshold = static_cast<int>(parse_int(key, value));
            } else if (key == "crop_size") {
                cfg.train.crop.size = static_cast<int>(parse_int(key, value));
            } else if (key == "timesteps") {
                cfg.train.timesteps = TimestepDistribution::parse(value);
            } else if (key == "optimizer") {
                if (value == "sgd") cfg.train.optimizer = OptimizerKind::Sgd;
                else if (value == "adamw") cfg.train.optimizer = OptimizerKind::AdamW;
                else throw ConfigError("config: optimizer must be sgd or adamw");
            } else if (key == "lr") {
                cfg.train.lr = parse_double(key, value);
            } else if (key == "beta1") {
                cfg.train.beta1 = parse_double(key, value);
            } else if (key == "beta2") {
                cfg.train.beta2 = parse_double(key, value);
            } else if (key == "weight_decay") {
                cfg.train.weight_decay = parse_double(key, value);
            } else if (key == "iterations") {
                cfg.train.iterations = static_cast<int>(parse_int(key, value));
            } else if (key == "batch_size") {
                cfg.train.batch_size = static_cast<int>(parse_int(key, value));
            } else if (key == "seed") {
                cfg.train.seed = static_cast<std::uint64_t>(parse_int(key, value));
            } else if (key == "sample_seed") {
                cfg.sample_seed = static_cast<std::uint64_t>(parse_int(key, value));
            } else if (key == "steps") {
                cfg.steps = static_cast<int>(parse_int(key, value));
            } else if (key == "test_batch") {
                cfg.test_batch = parse_int(key, value);
            } else if (key == "out") {
                cfg.out_dir = value;
            } else if (key == "checkpoint") {
                cfg.checkpoint = value;
            } else if (key == "sweep") {
                cfg.sweep = value;
            } else if (key == "values") {
                cfg.sweep_values = split_commas(value);
            } else if (key == "oracle_spec") {
                cfg.oracle_spec = value;
                GaussianTaskSpec::parse(value);
            } else if (key == "oracle_n") {
                cfg.oracle_n = parse_int(key, value);
            } else if (key == "oracle_bins") {
                cfg.oracle_bins = static_cast<int>(parse_int(key, value));
            } else {
                throw ConfigError("config: unknown key '" + key + "'");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError("config: bad value for '" + key + "': " + e.what());
        }
    }
    if (merged.find("sample_seed") == merged.end()) cfg.sample_seed = cfg.train.seed;
    if (cfg.train.lambda > 0 && cfg.train.pixel_loss == PixelLossKind::None)
        throw ConfigError("config: lambda > 0 requires pixel_loss l1 or l2");
    if (cfg.train.crop.size > cfg.train.crop.threshold)
        throw ConfigError("config: crop_size must be <= crop_threshold");
    if (cfg.steps < 1) throw ConfigError("config: steps must be >= 1");
    return cfg;
}

std::map<std::string, std::string> RunConfig::echo() const {
    std::map<std::string, std::string> kv;
    kv["task"] = task;
    kv["codec"] = codec;
    std::string h;
    for (std::size_t i = 0; i < hidden.size(); ++i)
        h += (i ? "," : "") + std::to_string(hidden[i]);
    kv["hidden"] = h;
    kv["sigma"] = format_double(static_cast<double>(train.sigma.value));
    kv["lambda"] = format_double(train.lambda);
    kv["pixel_loss"] = pixel_loss_name(train.pixel_loss);
    kv["crop_threshold"] = std::to_string(train.crop.threshold);
    kv["crop_size"] = std::to_string(train.crop.size);
    kv["timesteps"] = train.timesteps.to_string();
    kv["optimizer"] = train.optimizer == OptimizerKind::Sgd ? "sgd" : "adamw";
    kv["lr"] = format_double(train.lr);
    kv["beta1"] = format_double(train.beta1);
    kv["beta2"] = format_double(train.beta2);
    kv["weight_decay"] = format_double(train.weight_decay);
    kv["iterations"] = std::to_string(train.iterations);
    kv["batch_size"] = std::to_string(train.batch_size);
    kv["seed"] = std::to_string(train.seed);
    kv["sample_seed"] = std::to_string(sample_seed);
    kv["steps"] = std::to_string(steps);
    kv["test_batch"] = std::to_string(test_batch);
    kv["out"] = out_dir;
    if (!checkpoint.empty()) kv["checkpoint"] = checkpoint;
    kv["oracle_spec"] = oracle_spec;
    kv["oracle_n"] = std::to_string(oracle_n);
    kv["oracle_bins"] = std::to_string(oracle_bins);
    return kv;
}

std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open file '" + path.string() + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: " + path.string() + ":" + std::to_string(lineno) +
                              ": expected key=value, got '" + line + "'");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

std::map<std::string, std::string> parse_flags(const std::vector<std::string>& args) {
    std::map<std::string, std::string> file_kv;
    std::map<std::string, std::string> flag_kv;
    for (const auto& arg : args) {
        if (arg.rfind("--", 0) != 0)
            throw ConfigError("config: expected --key=value, got '" + arg + "'");
        const auto eq = arg.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected --key=value, got '" + arg + "'");
        const std::string key = arg.substr(2, eq - 2);
        const std::string value = arg.substr(eq + 1);
        if (key == "config") {
            auto loaded = parse_config_file(value);
            file_kv.insert(loaded.begin(), loaded.end());
        } else {
            flag_kv[key] = value;
        }
    }
    for (const auto& [k, v] : flag_kv) file_kv[k] = v;
    return file_kv;
}

void write_config_echo(const std::filesystem::path& path, const RunConfig& cfg) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write config echo: " + path.string());
    for (const auto& [k, v] : cfg.echo()) out << k << "=" << v << "\n";
}

}  // namespace lbm
