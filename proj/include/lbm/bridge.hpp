#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lbm/tensor.hpp"

namespace lbm {

/// Bridge noise scale. Zero selects the deterministic (flow) limit.
struct SigmaParam {
    float value{0.0f};

    SigmaParam() = default;
    explicit SigmaParam(float v);
};

/// z_t = (1-t) z0 + t z1 + sigma sqrt(t(1-t)) eps, per-sample t broadcast
/// over feature dims. The noise term is skipped when its coefficient is
/// zero, so sigma == 0 and the endpoints are bitwise exact.
TensorBatch interpolate(const TensorBatch& z0, const TensorBatch& z1,
                        std::span<const float> t, SigmaParam sigma,
                        const TensorBatch& eps);

/// (z1 - zt) / (1 - t). Requires t <= 1 - 1e-6 per sample.
TensorBatch drift_target(const TensorBatch& z1, const TensorBatch& zt,
                         std::span<const float> t);

/// (1 - t) v + zt: the predicted endpoint recovered from a drift estimate.
TensorBatch predict_target(const TensorBatch& v, const TensorBatch& zt,
                           std::span<const float> t);

/// One training batch: endpoints, noise, interpolated state and drift
/// regression targets, plus optional conditioning and the pixel-space
/// target when a pixel loss needs it.
struct BridgeBatch {
    TensorBatch z0;
    TensorBatch z1;
    std::vector<float> t;
    TensorBatch eps;
    TensorBatch zt;
    TensorBatch drift;
    std::optional<TensorBatch> cond;
    std::optional<TensorBatch> x1;
};

BridgeBatch make_bridge_batch(TensorBatch z0, TensorBatch z1,
                              std::vector<float> t, SigmaParam sigma,
                              TensorBatch eps,
                              std::optional<TensorBatch> cond = std::nullopt,
                              std::optional<TensorBatch> x1 = std::nullopt);

}  // namespace lbm
