#include "lbm/train.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace lbm {

namespace {

constexpr double kDivergenceLimit = 1e6;

// stream tags under the master seed
constexpr std::uint64_t kTagData = 10;
constexpr std::uint64_t kTagTimestep = 11;
constexpr std::uint64_t kTagNoise = 12;
constexpr std::uint64_t kTagCrop = 13;

}  // namespace

LossValue lbm_loss(const DriftModel& m, const BridgeBatch& batch) {
    if (batch.zt.n() < 1) throw std::invalid_argument("lbm_loss: empty batch");
    const TensorBatch pred = forward(m, batch.zt, batch.t,
                                     batch.cond ? &*batch.cond : nullptr);
    const std::size_t count = pred.data.size();
    const double inv = 1.0 / static_cast<double>(count);

    TensorBatch upstream(pred.shape);
    double loss = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        const double r = static_cast<double>(pred.data[k]) - batch.drift.data[k];
        loss += r * r;
        upstream.data[k] = static_cast<float>(2.0 * r * inv);
    }
    LossValue out;
    out.value = loss * inv;
    out.grad = backward(m, batch.zt, batch.t, batch.cond ? &*batch.cond : nullptr, upstream);
    return out;
}

std::optional<CropRect> draw_crop(std::int64_t h, std::int64_t w,
                                  const CropPolicy& crop, RngStream& stream) {
    if (h <= crop.threshold && w <= crop.threshold) return std::nullopt;
    if (crop.size > h || crop.size > w)
        throw std::invalid_argument("crop larger than image");
    CropRect r;
    r.size = crop.size;
    const auto span_y = h - crop.size + 1;
    const auto span_x = w - crop.size + 1;
    r.y0 = static_cast<int>(std::min<std::int64_t>(
        static_cast<std::int64_t>(stream.next_uniform() * static_cast<double>(span_y)),
        span_y - 1));
    r.x0 = static_cast<int>(std::min<std::int64_t>(
        static_cast<std::int64_t>(stream.next_uniform() * static_cast<double>(span_x)),
        span_x - 1));
    return r;
}

LossValue pixel_loss(const DriftModel& m, const Codec& codec, const BridgeBatch& batch,
                     PixelLossKind kind, const CropPolicy& crop, RngStream& stream) {
    if (batch.zt.n() < 1) throw std::invalid_argument("pixel_loss: empty batch");
    if (kind == PixelLossKind::None)
        throw std::invalid_argument("pixel_loss: kind must be L1 or L2");
    if (!batch.x1)
        throw std::invalid_argument("pixel_loss: batch carries no pixel-space target");
    if (crop.size < 1 || crop.size > crop.threshold)
        throw std::invalid_argument("pixel_loss: need 1 <= crop size <= threshold");

    const TensorBatch* cond = batch.cond ? &*batch.cond : nullptr;
    const TensorBatch pred_drift = forward(m, batch.zt, batch.t, cond);
    const TensorBatch z1_hat = predict_target(pred_drift, batch.zt, batch.t);
    const TensorBatch x1_hat = decode(codec, z1_hat);
    const TensorBatch& x1 = *batch.x1;
    if (!x1_hat.same_shape(x1))
        throw std::invalid_argument("pixel_loss: decoded shape does not match target");

    std::optional<CropRect> rect;
    if (x1.rank() == 4) rect = draw_crop(x1.shape[2], x1.shape[3], crop, stream);

    TensorBatch pix_grad(x1.shape);
    double loss = 0.0;
    std::int64_t contributing = 0;
    auto accumulate = [&](std::size_t k) {
        const double d = static_cast<double>(x1_hat.data[k]) - x1.data[k];
        if (kind == PixelLossKind::L2) {
            loss += d * d;
            pix_grad.data[k] = static_cast<float>(2.0 * d);
        } else {
            loss += std::abs(d);
            pix_grad.data[k] = d > 0.0 ? 1.0f : (d < 0.0 ? -1.0f : 0.0f);
        }
        ++contributing;
    };
    if (!rect) {
        for (std::size_t k = 0; k < x1.data.size(); ++k) accumulate(k);
    } else {
        const std::int64_t ch = x1.shape[1], h = x1.shape[2], w = x1.shape[3];
        for (std::int64_t s = 0; s < x1.n(); ++s)
            for (std::int64_t c = 0; c < ch; ++c)
                for (std::int64_t y = rect->y0; y < rect->y0 + rect->size; ++y)
                    for (std::int64_t x = rect->x0; x < rect->x0 + rect->size; ++x)
                        accumulate(static_cast<std::size_t>(((s * ch + c) * h + y) * w + x));
    }
    const double inv = 1.0 / static_cast<double>(contributing);
    for (auto& g : pix_grad.data) g = static_cast<float>(g * inv);

    TensorBatch latent_grad = decode_vjp(codec, pix_grad);
    // d z1_hat / d drift = (1 - t) per sample
    const std::int64_t d = latent_grad.feature_size();
    for (std::int64_t i = 0; i < latent_grad.n(); ++i) {
        const float a = 1.0f - batch.t[static_cast<std::size_t>(i)];
        float* g = latent_grad.row(i);
        for (std::int64_t j = 0; j < d; ++j) g[j] *= a;
    }

    LossValue out;
    out.value = loss * inv;
    out.grad = backward(m, batch.zt, batch.t, cond, latent_grad);
    return out;
}

TotalLoss total_loss(const DriftModel& m, const Codec& codec, const BridgeBatch& batch,
                     const TrainConfig& cfg, RngStream& crop_stream) {
    if (cfg.lambda < 0.0) throw std::invalid_argument("total_loss: lambda must be >= 0");
    TotalLoss out;
    LossValue bridge = lbm_loss(m, batch);
    out.bridge = bridge.value;
    out.grad = std::move(bridge.grad);
    if (cfg.lambda > 0.0 && cfg.pixel_loss != PixelLossKind::None) {
        LossValue pixel = pixel_loss(m, codec, batch, cfg.pixel_loss, cfg.crop, crop_stream);
        out.pixel = pixel.value;
        for (std::size_t k = 0; k < out.grad.size(); ++k)
            out.grad[k] += static_cast<float>(cfg.lambda * pixel.grad[k]);
    }
    out.total = out.bridge + cfg.lambda * out.pixel;
    return out;
}

Optimizer Optimizer::from_config(const TrainConfig& cfg) {
    Optimizer opt;
    opt.kind = cfg.optimizer;
    opt.lr = cfg.lr;
    opt.beta1 = cfg.beta1;
    opt.beta2 = cfg.beta2;
    opt.weight_decay = cfg.weight_decay;
    return opt;
}

void Optimizer::step(std::vector<float>& params, std::span<const float> grad) {
    if (params.size() != grad.size())
        throw std::invalid_argument("optimizer: gradient size mismatch");
    if (kind == OptimizerKind::Sgd) {
        for (std::size_t i = 0; i < params.size(); ++i)
            params[i] -= static_cast<float>(lr * grad[i]);
        return;
    }
    if (m.size() != params.size()) {
        m.assign(params.size(), 0.0f);
        v.assign(params.size(), 0.0f);
    }
    step_count += 1;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step_count));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step_count));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grad[i];
        const double mi = beta1 * m[i] + (1.0 - beta1) * g;
        const double vi = beta2 * v[i] + (1.0 - beta2) * g * g;
        m[i] = static_cast<float>(mi);
        v[i] = static_cast<float>(vi);
        const double m_hat = mi / bc1;
        const double v_hat = vi / bc2;
        params[i] -= static_cast<float>(
            lr * (m_hat / (std::sqrt(v_hat) + eps) + weight_decay * params[i]));
    }
}

namespace {

std::string format_loss(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", value);
    return buf;
}

}  // namespace

DivergenceError::DivergenceError(int iter, double value)
    : std::runtime_error("training diverged at iteration " + std::to_string(iter) +
                         ": loss " + format_loss(value)),
      iteration(iter),
      loss(value) {}

TrainReport train_run(const TrainConfig& cfg, const PairedTask& task, const Codec& codec,
                      DriftModel& model) {
    if (cfg.batch_size < 1) throw std::invalid_argument("train: batch size must be >= 1");
    if (cfg.iterations < 0) throw std::invalid_argument("train: iterations must be >= 0");
    if (cfg.lambda > 0.0 && cfg.pixel_loss == PixelLossKind::None)
        throw std::invalid_argument("train: lambda > 0 needs a pixel loss kind");
    if (cfg.crop.size > cfg.crop.threshold)
        throw std::invalid_argument("train: crop size must be <= crop threshold");

    RngStream data_stream = derive_stream(cfg.seed, kTagData);
    RngStream t_stream = derive_stream(cfg.seed, kTagTimestep);
    RngStream noise_stream = derive_stream(cfg.seed, kTagNoise);
    RngStream crop_stream = derive_stream(cfg.seed, kTagCrop);

    const bool want_pixel = cfg.lambda > 0.0 && cfg.pixel_loss != PixelLossKind::None;
    Optimizer opt = Optimizer::from_config(cfg);

    TrainReport report;
    report.bridge_series.reserve(static_cast<std::size_t>(cfg.iterations));
    const auto start = std::chrono::steady_clock::now();

    for (int iter = 1; iter <= cfg.iterations; ++iter) {
        PairBatch pairs = task.sample(cfg.batch_size, data_stream);
        TensorBatch z0 = encode(codec, pairs.x0);
        TensorBatch z1 = encode(codec, pairs.x1);
        std::optional<TensorBatch> cond;
        if (pairs.cond)
            cond = pairs.cond->rank() == 4 ? encode(codec, *pairs.cond) : *pairs.cond;

        std::vector<float> t = sample_t(cfg.timesteps, cfg.batch_size, t_stream);
        if (cfg.timesteps.is_discrete())
            for (float ti : t)
                if (!cfg.timesteps.contains(ti))
                    throw std::logic_error("train: sampled t outside the training support");

        TensorBatch eps = gaussian_noise(z0.shape, noise_stream);
        BridgeBatch batch = make_bridge_batch(
            std::move(z0), std::move(z1), std::move(t), cfg.sigma, std::move(eps),
            std::move(cond),
            want_pixel ? std::optional<TensorBatch>(std::move(pairs.x1)) : std::nullopt);

        TotalLoss losses = total_loss(model, codec, batch, cfg, crop_stream);
        if (!std::isfinite(losses.total) || losses.total > kDivergenceLimit)
            throw DivergenceError(iter, losses.total);

        opt.step(model.params, losses.grad);
        report.bridge_series.push_back(losses.bridge);
        report.pixel_series.push_back(losses.pixel);
        report.total_series.push_back(losses.total);
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.final_params = model.params;
    return report;
}

void write_loss_csv(const std::filesystem::path& path, const TrainReport& report) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write loss csv: " + path.string());
    out << "iteration,bridge_loss,pixel_loss,total_loss\n";
    char buf[160];
    for (std::size_t i = 0; i < report.total_series.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.12g,%.12g,%.12g\n", i + 1,
                      report.bridge_series[i], report.pixel_series[i],
                      report.total_series[i]);
        out << buf;
    }
}

}  // namespace lbm
