// Acceptance suite: one pass/fail line per criterion. Each criterion pins
// its tolerances in code; run with --only N to execute a single one.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "lbm/eval.hpp"
#include "lbm/oracle.hpp"
#include "lbm/runner.hpp"
#include "lbm/sample.hpp"

using namespace lbm;

namespace {

struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define ACC_CHECK(cond, ...)                                                    \
    do {                                                                        \
        if (!(cond)) {                                                          \
            char _buf[256];                                                     \
            std::snprintf(_buf, sizeof(_buf), __VA_ARGS__);                     \
            throw CheckFailure(std::string(_buf) + " (line " +                  \
                               std::to_string(__LINE__) + ")");                 \
        }                                                                       \
    } while (0)

double normal_pdf(double x, double mean, double var) {
    const double d = x - mean;
    return std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

double batch_mean(const TensorBatch& t) {
    double acc = 0.0;
    for (float v : t.data) acc += v;
    return acc / static_cast<double>(t.data.size());
}

double batch_sd(const TensorBatch& t) {
    const double mean = batch_mean(t);
    double acc = 0.0;
    for (float v : t.data) acc += (v - mean) * (v - mean);
    return std::sqrt(acc / static_cast<double>(t.data.size() - 1));
}

// ---------------------------------------------------------------------------
// 1. bridge identities over randomized cases
// ---------------------------------------------------------------------------
void criterion_1() {
    RngStream stream(1001);
    const float sigmas[3] = {0.0f, 0.05f, 0.5f};
    for (int rep = 0; rep < 1000; ++rep) {
        const TensorBatch z0 = gaussian_noise({4, 3}, stream);
        const TensorBatch z1 = gaussian_noise({4, 3}, stream);
        const TensorBatch eps = gaussian_noise({4, 3}, stream);
        const SigmaParam sigma(sigmas[rep % 3]);
        std::vector<float> t(4);
        for (auto& x : t) x = static_cast<float>(0.99 * stream.next_uniform());

        // endpoint pinning, bitwise
        const std::vector<float> t0(4, 0.0f), t1(4, 1.0f);
        ACC_CHECK(interpolate(z0, z1, t0, sigma, eps).data == z0.data,
                  "endpoint t=0 not pinned (rep %d)", rep);
        ACC_CHECK(interpolate(z0, z1, t1, sigma, eps).data == z1.data,
                  "endpoint t=1 not pinned (rep %d)", rep);

        // sigma = 0 is independent of eps, bitwise
        if (sigma.value == 0.0f) {
            const TensorBatch eps2 = gaussian_noise({4, 3}, stream);
            ACC_CHECK(interpolate(z0, z1, t, sigma, eps).data ==
                          interpolate(z0, z1, t, sigma, eps2).data,
                      "sigma=0 output depends on eps (rep %d)", rep);
        }

        // reconstruction identity within 1e-5 relative
        const TensorBatch zt = interpolate(z0, z1, t, sigma, eps);
        const TensorBatch back = predict_target(drift_target(z1, zt, t), zt, t);
        for (std::size_t k = 0; k < back.data.size(); ++k) {
            const double denom = std::max(1.0, std::abs(static_cast<double>(z1.data[k])));
            ACC_CHECK(std::abs(back.data[k] - z1.data[k]) / denom <= 1e-5,
                      "reconstruction off at rep %d elem %zu", rep, k);
        }
    }
}

// ---------------------------------------------------------------------------
// 2. bridge moments across t and sigma
// ---------------------------------------------------------------------------
void criterion_2() {
    const std::int64_t n = 100000;
    const float z0v = 0.7f, z1v = -0.9f;
    RngStream stream(1002);
    const TensorBatch z0 = TensorBatch::full({n, 1}, z0v);
    const TensorBatch z1 = TensorBatch::full({n, 1}, z1v);
    for (float tv : {0.25f, 0.5f, 0.75f}) {
        for (float sigma : {0.05f, 0.2f}) {
            const TensorBatch eps = gaussian_noise({n, 1}, stream);
            const std::vector<float> t(static_cast<std::size_t>(n), tv);
            const TensorBatch zt = interpolate(z0, z1, t, SigmaParam(sigma), eps);

            const double mean = batch_mean(zt);
            const double sd = batch_sd(zt);
            const double var = sd * sd;
            const double expect_mean = (1.0 - tv) * z0v + tv * z1v;
            const double expect_var =
                static_cast<double>(sigma) * sigma * tv * (1.0 - tv);
            const double se_mean = std::sqrt(expect_var / static_cast<double>(n));
            const double se_var = expect_var * std::sqrt(2.0 / static_cast<double>(n - 1));
            ACC_CHECK(std::abs(mean - expect_mean) <= 3.0 * se_mean,
                      "mean off at t=%.2f sigma=%.2f: %.6f vs %.6f", tv, sigma, mean,
                      expect_mean);
            ACC_CHECK(std::abs(var - expect_var) <= 3.0 * se_var,
                      "variance off at t=%.2f sigma=%.2f: %.6g vs %.6g", tv, sigma, var,
                      expect_var);
        }
    }
}

// ---------------------------------------------------------------------------
// 3. trained drift matches the closed-form oracle
// ---------------------------------------------------------------------------
void criterion_3() {
    TrainConfig cfg;
    cfg.sigma = SigmaParam(0.1f);
    cfg.timesteps = TimestepDistribution::discrete_uniform(4);
    cfg.iterations = 5000;
    cfg.batch_size = 128;
    cfg.lr = 1e-3;
    cfg.seed = 1003;
    const PairedTask task = gauss1d(0, 1, 2, 1);
    RngStream init = derive_stream(cfg.seed, 1);
    DriftModel model = init_params({2, 64, 64, 1}, 0, init);
    train_run(cfg, task, Codec::identity(), model);

    const GaussianTaskSpec spec{0, 1, 2, 1, 0.1};
    double weighted_sq = 0.0, weight_total = 0.0;
    for (double t : {0.0, 0.25, 0.5, 0.75}) {
        TensorBatch z({17, 1});
        for (int i = 0; i < 17; ++i)
            z.data[static_cast<std::size_t>(i)] = static_cast<float>(-3.0 + 6.0 * i / 16.0);
        const std::vector<float> tv(17, static_cast<float>(t));
        const TensorBatch v_hat = forward(model, z, tv);
        for (int i = 0; i < 17; ++i) {
            const double zi = z.data[static_cast<std::size_t>(i)];
            const double w =
                normal_pdf(zi, zt_marginal_mean(spec, t), zt_marginal_var(spec, t));
            const double diff = v_hat.data[static_cast<std::size_t>(i)] -
                                gaussian_drift(spec, zi, t);
            weighted_sq += w * diff * diff;
            weight_total += w;
        }
    }
    const double rms = std::sqrt(weighted_sq / weight_total);
    std::printf("    oracle-equivalence RMS = %.4f (bound 0.15)\n", rms);
    ACC_CHECK(rms <= 0.15, "weighted RMS %.4f exceeds 0.15", rms);
}

// ---------------------------------------------------------------------------
// 4. transport quality on rings2d
// ---------------------------------------------------------------------------
void criterion_4() {
    TrainConfig cfg;
    cfg.sigma = SigmaParam(0.05f);
    cfg.timesteps = TimestepDistribution::discrete_uniform(4);
    cfg.iterations = 5000;
    cfg.batch_size = 128;
    cfg.lr = 1e-3;
    cfg.seed = 1004;
    const PairedTask task = rings2d();
    RngStream init = derive_stream(cfg.seed, 1);
    DriftModel model = init_params({3, 128, 128, 2}, 0, init);
    train_run(cfg, task, Codec::identity(), model);

    RngStream data = derive_stream(cfg.seed, 20);
    const PairBatch test = task.sample(2000, data);
    const SolverGrid grid = inference_grid(cfg.timesteps, 4);
    RngStream noise = derive_stream(cfg.seed, 21);
    const TranslateResult gen =
        translate(model, Codec::identity(), test.x0, grid, cfg.sigma, noise);

    const double base = energy_distance(test.x0, test.x1);
    const double ours = energy_distance(gen.output, test.x1);
    std::printf("    energy distance: generated %.4f vs source %.4f (need <= %.4f)\n",
                ours, base, 0.1 * base);
    ACC_CHECK(ours <= 0.1 * base, "energy distance ratio %.3f exceeds 0.1", ours / base);
}

// ---------------------------------------------------------------------------
// 5. stochasticity separates bridge sampling from the deterministic limit
// ---------------------------------------------------------------------------
void criterion_5() {
    const PairedTask task = point_to_bimodal();
    const std::vector<std::vector<float>> centers{{-2.0f, 0.0f}, {2.0f, 0.0f}};
    for (std::uint64_t seed : {1, 2, 3}) {
        for (float sigma : {0.0f, 0.3f}) {
            TrainConfig cfg;
            cfg.sigma = SigmaParam(sigma);
            cfg.timesteps = TimestepDistribution::discrete_uniform(4);
            cfg.iterations = 4000;
            cfg.batch_size = 128;
            cfg.lr = 1e-3;
            cfg.seed = 5000 + seed;
            RngStream init = derive_stream(cfg.seed, 1);
            DriftModel model = init_params({3, 64, 64, 2}, 0, init);
            train_run(cfg, task, Codec::identity(), model);

            RngStream data = derive_stream(cfg.seed, 20);
            const PairBatch test = task.sample(1000, data);
            const SolverGrid grid = inference_grid(cfg.timesteps, 4);
            RngStream noise = derive_stream(cfg.seed, 21);
            const TranslateResult gen =
                translate(model, Codec::identity(), test.x0, grid, cfg.sigma, noise);
            const auto fractions = conditional_coverage(gen.output, centers, 1.0);
            const bool is_covered = covered(fractions);
            std::printf("    seed %llu sigma %.1f: mode fractions %.3f / %.3f -> %s\n",
                        static_cast<unsigned long long>(seed), sigma, fractions[0],
                        fractions[1], is_covered ? "covered" : "not covered");
            if (sigma == 0.0f)
                ACC_CHECK(!is_covered, "sigma=0 unexpectedly covered (seed %llu)",
                          static_cast<unsigned long long>(seed));
            else
                ACC_CHECK(is_covered, "sigma=0.3 failed to cover (seed %llu)",
                          static_cast<unsigned long long>(seed));
        }
    }
}

// ---------------------------------------------------------------------------
// 6. gradients vs finite differences, plain and composite
// ---------------------------------------------------------------------------

// double-precision MLP: input [z, t, c], tanh hiddens, linear output
std::vector<double> mlp_double(const std::vector<int>& widths,
                               const std::vector<double>& params,
                               const std::vector<double>& input) {
    std::vector<double> act = input;
    std::size_t offset = 0;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        const int in = widths[l], out = widths[l + 1];
        std::vector<double> next(static_cast<std::size_t>(out));
        for (int o = 0; o < out; ++o) {
            double acc =
                params[offset + static_cast<std::size_t>(in) * out + static_cast<std::size_t>(o)];
            for (int j = 0; j < in; ++j)
                acc += params[offset + static_cast<std::size_t>(o * in + j)] *
                       act[static_cast<std::size_t>(j)];
            next[static_cast<std::size_t>(o)] = (l + 2 < widths.size()) ? std::tanh(acc) : acc;
        }
        offset += static_cast<std::size_t>(in) * out + static_cast<std::size_t>(out);
        act = std::move(next);
    }
    return act;
}

// composite objective in double precision: drift MSE + lambda * cropped
// L2 pixel loss through an avg-pool(2) decode, matching total_loss
double composite_double(const std::vector<int>& widths, const std::vector<double>& params,
                        const BridgeBatch& batch, double lambda, const CropRect& rect,
                        int factor) {
    const std::int64_t n = batch.zt.n();
    const std::int64_t latent = batch.zt.feature_size();
    const std::int64_t lc = batch.zt.shape[1], lh = batch.zt.shape[2],
                       lw = batch.zt.shape[3];
    const TensorBatch& x1 = *batch.x1;
    const std::int64_t h = x1.shape[2], w = x1.shape[3];

    double bridge = 0.0, pixel = 0.0;
    std::int64_t pixel_count = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        std::vector<double> input(static_cast<std::size_t>(latent) + 1);
        for (std::int64_t j = 0; j < latent; ++j)
            input[static_cast<std::size_t>(j)] = batch.zt.row(i)[j];
        input[static_cast<std::size_t>(latent)] = batch.t[static_cast<std::size_t>(i)];
        const std::vector<double> v = mlp_double(widths, params, input);

        for (std::int64_t j = 0; j < latent; ++j) {
            const double r = v[static_cast<std::size_t>(j)] - batch.drift.row(i)[j];
            bridge += r * r;
        }

        const double a = 1.0 - batch.t[static_cast<std::size_t>(i)];
        for (std::int64_t c = 0; c < lc; ++c)
            for (std::int64_t y = rect.y0; y < rect.y0 + rect.size; ++y)
                for (std::int64_t x = rect.x0; x < rect.x0 + rect.size; ++x) {
                    const std::int64_t lidx = (c * lh + y / factor) * lw + x / factor;
                    const double z1_hat = a * v[static_cast<std::size_t>(lidx)] +
                                          batch.zt.row(i)[lidx];
                    const double d =
                        z1_hat - x1.data[static_cast<std::size_t>(((i * lc + c) * h + y) * w + x)];
                    pixel += d * d;
                    ++pixel_count;
                }
    }
    bridge /= static_cast<double>(n * latent);
    pixel /= static_cast<double>(pixel_count);
    return bridge + lambda * pixel;
}

void criterion_6() {
    RngStream stream(1006);

    // plain backward against the double-precision objective
    for (int rep = 0; rep < 10; ++rep) {
        const std::vector<int> widths{4, 8, 3};
        DriftModel m = init_params(widths, 0, stream);
        const TensorBatch zt = gaussian_noise({3, 3}, stream);
        const TensorBatch upstream = gaussian_noise({3, 3}, stream);
        std::vector<float> t(3);
        for (auto& x : t) x = static_cast<float>(0.9 * stream.next_uniform());
        const std::vector<float> grad = backward(m, zt, t, nullptr, upstream);

        std::vector<double> p(m.params.begin(), m.params.end());
        const double h = 1e-4;
        for (std::size_t k = 0; k < p.size(); ++k) {
            auto objective = [&](const std::vector<double>& pp) {
                double total = 0.0;
                for (std::int64_t i = 0; i < 3; ++i) {
                    std::vector<double> input{zt.row(i)[0], zt.row(i)[1], zt.row(i)[2],
                                              t[static_cast<std::size_t>(i)]};
                    const auto out = mlp_double(widths, pp, input);
                    for (int j = 0; j < 3; ++j)
                        total += out[static_cast<std::size_t>(j)] * upstream.row(i)[j];
                }
                return total;
            };
            std::vector<double> plus = p, minus = p;
            plus[k] += h;
            minus[k] -= h;
            const double fd = (objective(plus) - objective(minus)) / (2.0 * h);
            if (std::abs(fd) > 1e-8)
                ACC_CHECK(std::abs(grad[k] - fd) / std::abs(fd) <= 1e-3,
                          "plain gradient off at rep %d coord %zu", rep, k);
            else
                ACC_CHECK(std::abs(grad[k] - fd) <= 1e-6,
                          "plain gradient off at rep %d coord %zu", rep, k);
        }
    }

    // composite loss with lambda = 10 through an avg-pool codec
    const Codec codec = Codec::avg_pool(2);
    for (int rep = 0; rep < 10; ++rep) {
        const std::vector<int> widths{17, 12, 16};  // 4x4 latent from 8x8 images
        DriftModel m = init_params(widths, 0, stream);
        TensorBatch x0 = gaussian_noise({2, 1, 8, 8}, stream);
        TensorBatch x1 = gaussian_noise({2, 1, 8, 8}, stream);
        TensorBatch eps = gaussian_noise({2, 1, 4, 4}, stream);
        std::vector<float> t(2);
        for (auto& x : t) x = static_cast<float>(0.75 * stream.next_uniform());
        TensorBatch z0 = encode(codec, x0);
        TensorBatch z1 = encode(codec, x1);
        BridgeBatch batch =
            make_bridge_batch(std::move(z0), std::move(z1), t, SigmaParam(0.1f),
                              std::move(eps), std::nullopt, std::move(x1));

        TrainConfig cfg;
        cfg.lambda = 10.0;
        cfg.pixel_loss = PixelLossKind::L2;
        cfg.crop = CropPolicy{4, 4};
        RngStream crop_a(9000 + static_cast<std::uint64_t>(rep));
        RngStream crop_b = crop_a;
        const TotalLoss total = total_loss(m, codec, batch, cfg, crop_a);
        const auto rect = draw_crop(8, 8, cfg.crop, crop_b);
        ACC_CHECK(rect.has_value(), "crop expected for 8x8 with threshold 4");

        std::vector<double> p(m.params.begin(), m.params.end());
        const double h = 1e-4;
        for (std::size_t k = 0; k < p.size(); ++k) {
            std::vector<double> plus = p, minus = p;
            plus[k] += h;
            minus[k] -= h;
            const double fd = (composite_double(widths, plus, batch, 10.0, *rect, 2) -
                               composite_double(widths, minus, batch, 10.0, *rect, 2)) /
                              (2.0 * h);
            if (std::abs(fd) > 1e-8)
                ACC_CHECK(std::abs(total.grad[k] - fd) / std::abs(fd) <= 1e-3,
                          "composite gradient off at rep %d coord %zu", rep, k);
            else
                ACC_CHECK(std::abs(total.grad[k] - fd) <= 1e-6,
                          "composite gradient off at rep %d coord %zu", rep, k);
        }
    }
}

// ---------------------------------------------------------------------------
// 7. schedule discipline
// ---------------------------------------------------------------------------
void criterion_7() {
    // the in-loop support assertion must never fire across a full run
    TrainConfig cfg;
    cfg.sigma = SigmaParam(0.05f);
    cfg.timesteps = TimestepDistribution::discrete_uniform(4);
    cfg.iterations = 300;
    cfg.batch_size = 32;
    cfg.seed = 1007;
    const PairedTask task = gauss1d(0, 1, 2, 1);
    RngStream init = derive_stream(cfg.seed, 1);
    DriftModel model = init_params({2, 16, 1}, 0, init);
    try {
        train_run(cfg, task, Codec::identity(), model);
    } catch (const std::logic_error& e) {
        ACC_CHECK(false, "support assertion fired: %s", e.what());
    }

    // the aligned 4-step sampler evaluates exactly the training support
    const SolverGrid grid = inference_grid(cfg.timesteps, 4);
    ACC_CHECK(grid.t == (std::vector<float>{0.0f, 0.25f, 0.5f, 0.75f}),
              "4-step grid is not the training support");
    model.forward_calls = 0;
    RngStream noise(1);
    const TensorBatch z0 = TensorBatch::full({8, 1}, 0.0f);
    const PathResult res = sample_path(model, z0, grid, cfg.sigma, noise);
    ACC_CHECK(res.nfe == 4 && model.forward_calls == 4, "expected exactly 4 evaluations");

    // more steps than the support is a schedule error
    bool threw = false;
    try {
        inference_grid(cfg.timesteps, 8);
    } catch (const std::invalid_argument& e) {
        threw = std::string(e.what()).find("schedule error") != std::string::npos;
    }
    ACC_CHECK(threw, "8 steps on discrete:4 did not raise a schedule error");
}

// ---------------------------------------------------------------------------
// 8. conditional generation places the bar on the commanded side
// ---------------------------------------------------------------------------
void criterion_8() {
    TrainConfig cfg;
    cfg.sigma = SigmaParam(0.01f);
    cfg.timesteps = TimestepDistribution::discrete_uniform(4);
    cfg.iterations = 5000;
    cfg.batch_size = 64;
    cfg.lr = 1e-3;
    cfg.seed = 1008;
    const PairedTask task = shadow_toy(12);
    const Codec codec = Codec::avg_pool(2);

    RngStream init = derive_stream(cfg.seed, 1);
    DriftModel model = init_params({73, 128, 128, 36}, 36, init);
    train_run(cfg, task, codec, model);

    RngStream data = derive_stream(cfg.seed, 20);
    const PairBatch held_out = task.sample(200, data);
    const SolverGrid grid = inference_grid(cfg.timesteps, 1);
    RngStream noise = derive_stream(cfg.seed, 21);
    const TranslateResult gen = translate(model, codec, held_out.x0, grid, cfg.sigma,
                                          noise, &*held_out.cond);

    const int side = 12;
    int correct = 0;
    for (std::int64_t i = 0; i < 200; ++i) {
        double light_left_mass = 0.0, light_right_mass = 0.0;
        double out_left = 0.0, out_right = 0.0;
        const float* pc = held_out.cond->row(i);
        const float* po = gen.output.row(i);
        for (int y = 0; y < side; ++y)
            for (int x = 0; x < side; ++x) {
                (x < side / 2 ? light_left_mass : light_right_mass) += pc[y * side + x];
                (x < side / 2 ? out_left : out_right) += po[y * side + x];
            }
        const bool light_left = light_left_mass > light_right_mass;
        const bool bar_right = out_right < out_left;  // darker half holds the bar
        if (light_left == bar_right) ++correct;
    }
    std::printf("    correct bar side: %d / 200 (need >= 190)\n", correct);
    ACC_CHECK(correct >= 190, "only %d/200 conditions honored", correct);
}

// ---------------------------------------------------------------------------
// 9. solver error shrinks with step count under the closed-form drift
// ---------------------------------------------------------------------------
void criterion_9() {
    const GaussianTaskSpec spec{0, 1, 2, 1, 0};
    const DriftFn drift = [&](const TensorBatch& z, float t) {
        TensorBatch v(z.shape);
        for (std::size_t k = 0; k < z.data.size(); ++k)
            v.data[k] = static_cast<float>(gaussian_drift(spec, z.data[k], t));
        return v;
    };
    RngStream data(1009);
    const TensorBatch z0 = gaussian_noise({10000, 1}, data);
    double prev_err = 0.0, prev_se = 0.0;
    bool first = true;
    for (int steps : {1, 2, 4, 8, 16}) {
        const SolverGrid grid = inference_grid(TimestepDistribution::uniform(), steps);
        RngStream noise(1);
        const PathResult res = integrate_path(drift, z0, grid, SigmaParam(0.0f), noise);
        const double err = std::abs(batch_mean(res.final) - 2.0);
        const double se = batch_sd(res.final) / std::sqrt(10000.0);
        std::printf("    steps %2d: |mean - mu1| = %.5f (se %.5f)\n", steps, err, se);
        if (!first)
            ACC_CHECK(err <= prev_err + 3.0 * (se + prev_se),
                      "error grew past slack at %d steps", steps);
        prev_err = err;
        prev_se = se;
        first = false;
    }
}

// ---------------------------------------------------------------------------
// 10. end-to-end determinism of the run artifacts
// ---------------------------------------------------------------------------
std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckFailure("missing artifact: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_10() {
    const auto base = std::filesystem::temp_directory_path() / "lbm_acceptance_det";
    std::filesystem::remove_all(base);
    std::map<std::string, std::string> kv{
        {"task", "rings2d"},   {"codec", "identity"}, {"hidden", "32,32"},
        {"sigma", "0.1"},      {"iterations", "150"}, {"batch_size", "32"},
        {"seed", "77"},        {"steps", "4"},        {"test_batch", "256"},
    };
    std::string outputs[2], losses[2], tensors[2];
    for (int run = 0; run < 2; ++run) {
        const auto dir = base / ("run" + std::to_string(run));
        kv["out"] = dir.string();
        RunConfig cfg = RunConfig::resolve(kv);
        run_train(cfg);
        auto sample_kv = kv;
        sample_kv["checkpoint"] = (dir / "model.lbmt").string();
        sample_kv["out"] = (dir / "sample").string();
        run_sample(RunConfig::resolve(sample_kv));
        losses[run] = slurp(dir / "loss.csv");
        tensors[run] = slurp(dir / "model.lbmt");
        outputs[run] = slurp(dir / "sample" / "outputs.lbmt");
    }
    ACC_CHECK(losses[0] == losses[1], "loss CSVs differ between identical runs");
    ACC_CHECK(tensors[0] == tensors[1], "checkpoints differ between identical runs");
    ACC_CHECK(outputs[0] == outputs[1], "output tensors differ between identical runs");
    std::filesystem::remove_all(base);
}

struct Criterion {
    int id;
    const char* name;
    std::function<void()> run;
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);

    const std::vector<Criterion> criteria = {
        {1, "bridge identities (pinning, reconstruction, sigma=0)", criterion_1},
        {2, "bridge moments within 3 standard errors", criterion_2},
        {3, "trained drift matches the closed-form oracle", criterion_3},
        {4, "rings2d transport quality via energy distance", criterion_4},
        {5, "stochastic sampling covers both modes, deterministic does not", criterion_5},
        {6, "gradients match finite differences (plain and composite)", criterion_6},
        {7, "schedule discipline: support membership and step cap", criterion_7},
        {8, "conditional generation follows the light map", criterion_8},
        {9, "solver error shrinks with step count", criterion_9},
        {10, "bitwise-deterministic artifacts", criterion_10},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        if (only != 0 && criterion.id != only) continue;
        const auto start = std::chrono::steady_clock::now();
        try {
            criterion.run();
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                    .count();
            std::printf("[PASS] criterion %2d: %s (%.1fs)\n", criterion.id, criterion.name,
                        secs);
        } catch (const std::exception& e) {
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                    .count();
            std::printf("[FAIL] criterion %2d: %s (%.1fs)\n       %s\n", criterion.id,
                        criterion.name, secs, e.what());
            ++failures;
        }
        std::fflush(stdout);
    }
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
