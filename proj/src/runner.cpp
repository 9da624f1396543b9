#include "lbm/runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "lbm/eval.hpp"
#include "lbm/oracle.hpp"
#include "lbm/sample.hpp"

namespace lbm {

namespace {

// stream tags under the master seed (training uses 10..13)
constexpr std::uint64_t kTagInit = 1;
constexpr std::uint64_t kTagTestData = 20;
constexpr std::uint64_t kTagSolverNoise = 21;
constexpr std::uint64_t kTagMetrics = 22;
constexpr std::uint64_t kTagOracle = 30;

std::int64_t flat_size(std::span<const std::int64_t> dims) {
    std::int64_t total = 1;
    for (auto d : dims) total *= d;
    return total;
}

struct TaskDims {
    std::vector<std::int64_t> latent_shape;  // batch dim included, n = 1
    int latent_flat{0};
    int cond_flat{0};
};

TaskDims task_dims(const PairedTask& task, const Codec& codec) {
    TaskDims dims;
    std::vector<std::int64_t> full = {1};
    full.insert(full.end(), task.x_shape.begin(), task.x_shape.end());
    dims.latent_shape = codec.latent_shape(full);
    dims.latent_flat = static_cast<int>(flat_size({dims.latent_shape.data() + 1,
                                                   dims.latent_shape.size() - 1}));
    if (task.conditional) {
        std::vector<std::int64_t> cond_full = {1};
        cond_full.insert(cond_full.end(), task.cond_shape.begin(), task.cond_shape.end());
        const auto cond_latent =
            cond_full.size() == 4 ? codec.latent_shape(cond_full) : cond_full;
        dims.cond_flat = static_cast<int>(
            flat_size({cond_latent.data() + 1, cond_latent.size() - 1}));
    }
    return dims;
}

std::vector<int> model_widths(const RunConfig& cfg, const TaskDims& dims) {
    std::vector<int> widths;
    widths.push_back(dims.latent_flat + 1 + dims.cond_flat);
    widths.insert(widths.end(), cfg.hidden.begin(), cfg.hidden.end());
    widths.push_back(dims.latent_flat);
    return widths;
}

TensorBatch flatten_rows(const TensorBatch& t) {
    if (t.rank() == 2) return t;
    return TensorBatch({t.n(), t.feature_size()}, t.data);
}

struct MetricRow {
    std::string name;
    double value{0.0};
};

std::string format_metric(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

/// Translates a fresh test batch and computes the task's metric set.
struct EvalResult {
    TensorBatch outputs;
    TensorBatch targets;
    std::uint64_t nfe{0};
    std::vector<MetricRow> rows;
};

EvalResult evaluate(const RunConfig& cfg, const PairedTask& task, const Codec& codec,
                    const DriftModel& model) {
    RngStream data_stream = derive_stream(cfg.train.seed, kTagTestData);
    RngStream noise_stream = derive_stream(cfg.sample_seed, kTagSolverNoise);
    RngStream metric_stream = derive_stream(cfg.train.seed, kTagMetrics);

    const SolverGrid grid = inference_grid(cfg.train.timesteps, cfg.steps);
    PairBatch batch = task.sample(cfg.test_batch, data_stream);
    TranslateResult res =
        translate(model, codec, batch.x0, grid, cfg.train.sigma, noise_stream,
                  batch.cond ? &*batch.cond : nullptr);

    EvalResult out;
    out.nfe = res.nfe;
    out.rows.push_back({"nfe", static_cast<double>(res.nfe)});

    const TensorBatch flat_out = flatten_rows(res.output);
    const TensorBatch flat_tgt = flatten_rows(batch.x1);
    out.rows.push_back({"energy_distance", energy_distance(flat_out, flat_tgt)});
    out.rows.push_back(
        {"sliced_wasserstein", sliced_wasserstein(flat_out, flat_tgt, 64, metric_stream)});
    if (task.paired) {
        const PairedMetrics pm = paired_metrics(res.output, batch.x1);
        out.rows.push_back({"mse", pm.mse});
        out.rows.push_back({"psnr", pm.psnr});
    }
    if (task.name == "point_to_bimodal") {
        const auto fractions =
            conditional_coverage(flat_out, {{-2.0f, 0.0f}, {2.0f, 0.0f}}, 1.0);
        out.rows.push_back({"coverage_mode_neg", fractions[0]});
        out.rows.push_back({"coverage_mode_pos", fractions[1]});
        out.rows.push_back({"covered", covered(fractions) ? 1.0 : 0.0});
    }
    out.outputs = std::move(res.output);
    out.targets = std::move(batch.x1);
    return out;
}

DriftModel train_model(const RunConfig& cfg, const PairedTask& task, const Codec& codec,
                       TrainReport* report_out) {
    const TaskDims dims = task_dims(task, codec);
    RngStream init_stream = derive_stream(cfg.train.seed, kTagInit);
    DriftModel model = init_params(model_widths(cfg, dims), dims.cond_flat, init_stream);
    TrainReport report = train_run(cfg.train, task, codec, model);
    if (report_out) *report_out = std::move(report);
    return model;
}

std::string sanitize(const std::string& s) {
    std::string out = s;
    for (char& c : out)
        if (c == ':' || c == ',' || c == '/' || c == '@') c = '_';
    return out;
}

std::string csv_cell(const std::string& s) {
    if (s.find(',') == std::string::npos && s.find('"') == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

}  // namespace

void run_train(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    const PairedTask task = make_task(cfg.task);
    const Codec codec = Codec::parse(cfg.codec);

    TrainReport report;
    DriftModel model = train_model(cfg, task, codec, &report);

    const std::filesystem::path out(cfg.out_dir);
    save_checkpoint(out / "model.lbmt", model);
    write_loss_csv(out / "loss.csv", report);
    write_config_echo(out / "resolved.cfg", cfg);
}

void run_sample(const RunConfig& cfg) {
    if (cfg.checkpoint.empty())
        throw ConfigError("sample: a checkpoint=PATH is required");
    std::filesystem::create_directories(cfg.out_dir);
    const PairedTask task = make_task(cfg.task);
    const Codec codec = Codec::parse(cfg.codec);
    const DriftModel model = load_checkpoint(cfg.checkpoint);

    const TaskDims dims = task_dims(task, codec);
    const auto widths = model_widths(cfg, dims);
    if (model.widths != widths || model.cond_dim != dims.cond_flat)
        throw std::runtime_error("sample: checkpoint dims do not match task/codec config");

    EvalResult result = evaluate(cfg, task, codec, model);

    const std::filesystem::path out(cfg.out_dir);
    write_tensor(out / "outputs.lbmt", result.outputs);
    if (result.outputs.rank() == 2 && result.outputs.shape[1] == 2)
        write_points_csv(out / "outputs.csv", result.outputs);
    if (result.outputs.rank() == 4 && result.outputs.shape[1] == 1) {
        const std::int64_t count = std::min<std::int64_t>(8, result.outputs.n());
        char name[32];
        for (std::int64_t i = 0; i < count; ++i) {
            std::snprintf(name, sizeof(name), "output_%02lld.pgm",
                          static_cast<long long>(i));
            write_pgm(out / name, result.outputs, i);
        }
    }

    std::ofstream metrics(out / "metrics.csv");
    if (!metrics) throw std::runtime_error("cannot write metrics.csv");
    metrics << "metric,value,stderr\n";
    for (const auto& row : result.rows)
        metrics << row.name << "," << format_metric(row.value) << ",\n";
    write_config_echo(out / "resolved.cfg", cfg);
}

void run_ablation(const RunConfig& cfg) {
    static const std::vector<std::string> kSweeps = {"sigma", "lambda", "steps", "timesteps"};
    if (std::find(kSweeps.begin(), kSweeps.end(), cfg.sweep) == kSweeps.end())
        throw ConfigError("ablate: sweep must be one of sigma, lambda, steps, timesteps");
    if (cfg.sweep_values.empty())
        throw ConfigError("ablate: values=v1,v2,... is required");

    std::filesystem::create_directories(cfg.out_dir);
    write_config_echo(std::filesystem::path(cfg.out_dir) / "resolved.cfg", cfg);
    std::ofstream csv(std::filesystem::path(cfg.out_dir) / "ablation.csv");
    if (!csv) throw std::runtime_error("cannot write ablation.csv");
    csv << "sweep,value,metric,result\n";

    for (const auto& value : cfg.sweep_values) {
        auto kv = cfg.echo();
        kv[cfg.sweep] = value;
        kv["out"] = (std::filesystem::path(cfg.out_dir) /
                     ("sweep_" + cfg.sweep + "_" + sanitize(value)))
                        .string();
        kv.erase("checkpoint");
        RunConfig sub = RunConfig::resolve(kv);

        const PairedTask task = make_task(sub.task);
        const Codec codec = Codec::parse(sub.codec);
        try {
            // grid validity first: an over-long grid is a schedule error row
            inference_grid(sub.train.timesteps, sub.steps);
            std::filesystem::create_directories(sub.out_dir);
            TrainReport report;
            DriftModel model = train_model(sub, task, codec, &report);
            save_checkpoint(std::filesystem::path(sub.out_dir) / "model.lbmt", model);
            write_loss_csv(std::filesystem::path(sub.out_dir) / "loss.csv", report);
            write_config_echo(std::filesystem::path(sub.out_dir) / "resolved.cfg", sub);
            EvalResult result = evaluate(sub, task, codec, model);
            for (const auto& row : result.rows)
                csv << cfg.sweep << "," << csv_cell(value) << "," << row.name << ","
                    << format_metric(row.value) << "\n";
        } catch (const std::invalid_argument& e) {
            if (std::string(e.what()).find("schedule error") == std::string::npos) throw;
            csv << cfg.sweep << "," << csv_cell(value) << ",schedule_error,1\n";
        }
    }
}

void run_oracle_check(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    write_config_echo(std::filesystem::path(cfg.out_dir) / "resolved.cfg", cfg);
    const GaussianTaskSpec spec = GaussianTaskSpec::parse(cfg.oracle_spec);
    if (cfg.oracle_bins < 2) throw ConfigError("oracle: oracle_bins must be >= 2");

    const DriftModel* model_ptr = nullptr;
    DriftModel model;
    if (!cfg.checkpoint.empty()) {
        model = load_checkpoint(cfg.checkpoint);
        if (model.latent_dim() != 1)
            throw std::runtime_error("oracle: checkpoint must have a 1-d latent");
        model_ptr = &model;
    }

    std::ofstream csv(std::filesystem::path(cfg.out_dir) / "oracle.csv");
    if (!csv) throw std::runtime_error("cannot write oracle.csv");
    csv << "t,z,v_star,v_mc,stderr,abs_dev,three_stderr,count";
    if (model_ptr) csv << ",v_model";
    csv << "\n";

    RngStream stream = derive_stream(cfg.train.seed, kTagOracle);
    const double spacing = 6.0 / (cfg.oracle_bins - 1);
    const double lo = -3.0 - spacing / 2.0;
    const double hi = 3.0 + spacing / 2.0;
    for (const double t : {0.0, 0.25, 0.5, 0.75}) {
        const auto table =
            mc_binned_drift_range(spec, t, cfg.oracle_n, cfg.oracle_bins, lo, hi, stream);
        for (const auto& bin : table) {
            const double z = bin.count > 0 ? bin.z_mean : bin.z_center;
            const double v_star = gaussian_drift(spec, z, t);
            csv << format_metric(t) << "," << format_metric(z) << ","
                << format_metric(v_star) << ",";
            if (bin.count > 0) {
                csv << format_metric(bin.drift) << "," << format_metric(bin.stderr_) << ","
                    << format_metric(std::abs(v_star - bin.drift)) << ","
                    << format_metric(3.0 * bin.stderr_) << "," << bin.count;
            } else {
                csv << ",,,," << bin.count;
            }
            if (model_ptr) {
                TensorBatch zb({1, 1});
                zb.data[0] = static_cast<float>(z);
                const std::vector<float> tv = {static_cast<float>(t)};
                csv << "," << format_metric(forward(*model_ptr, zb, tv).data[0]);
            }
            csv << "\n";
        }
    }
}

}  // namespace lbm
