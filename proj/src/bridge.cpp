#include "lbm/bridge.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lbm {

namespace {

void check_same_shape(const TensorBatch& a, const TensorBatch& b, const char* what) {
    if (!a.same_shape(b)) throw std::invalid_argument(std::string(what) + ": shape mismatch");
}

void check_t_count(const TensorBatch& z, std::span<const float> t, const char* what) {
    if (static_cast<std::int64_t>(t.size()) != z.n())
        throw std::invalid_argument(std::string(what) + ": need one t per sample");
}

}  // namespace

SigmaParam::SigmaParam(float v) : value(v) {
    if (!(v >= 0.0f)) throw std::invalid_argument("sigma must be >= 0");
}

TensorBatch interpolate(const TensorBatch& z0, const TensorBatch& z1,
                        std::span<const float> t, SigmaParam sigma,
                        const TensorBatch& eps) {
    check_same_shape(z0, z1, "interpolate");
    check_same_shape(z0, eps, "interpolate");
    check_t_count(z0, t, "interpolate");
    for (float ti : t)
        if (!(ti >= 0.0f && ti <= 1.0f))
            throw std::invalid_argument("interpolate: t must lie in [0, 1], got " +
                                        std::to_string(ti));

    TensorBatch out(z0.shape);
    const std::int64_t d = z0.feature_size();
    for (std::int64_t i = 0; i < z0.n(); ++i) {
        const float ti = t[static_cast<std::size_t>(i)];
        const float a = 1.0f - ti;
        const float noise_coeff = sigma.value * std::sqrt(ti * (1.0f - ti));
        const float* p0 = z0.row(i);
        const float* p1 = z1.row(i);
        const float* pe = eps.row(i);
        float* po = out.row(i);
        if (noise_coeff != 0.0f) {
            for (std::int64_t j = 0; j < d; ++j)
                po[j] = a * p0[j] + ti * p1[j] + noise_coeff * pe[j];
        } else {
            for (std::int64_t j = 0; j < d; ++j) po[j] = a * p0[j] + ti * p1[j];
        }
    }
    return out;
}

TensorBatch drift_target(const TensorBatch& z1, const TensorBatch& zt,
                         std::span<const float> t) {
    check_same_shape(z1, zt, "drift_target");
    check_t_count(z1, t, "drift_target");
    for (float ti : t)
        if (!(ti <= 1.0f - 1e-6f))
            throw std::invalid_argument("drift_target: t too close to 1 (singular), got " +
                                        std::to_string(ti));

    TensorBatch out(z1.shape);
    const std::int64_t d = z1.feature_size();
    for (std::int64_t i = 0; i < z1.n(); ++i) {
        const float inv = 1.0f / (1.0f - t[static_cast<std::size_t>(i)]);
        const float* p1 = z1.row(i);
        const float* pt = zt.row(i);
        float* po = out.row(i);
        for (std::int64_t j = 0; j < d; ++j) po[j] = (p1[j] - pt[j]) * inv;
    }
    return out;
}

TensorBatch predict_target(const TensorBatch& v, const TensorBatch& zt,
                           std::span<const float> t) {
    check_same_shape(v, zt, "predict_target");
    check_t_count(v, t, "predict_target");
    for (float ti : t)
        if (!(ti < 1.0f))
            throw std::invalid_argument("predict_target: t must be < 1");

    TensorBatch out(v.shape);
    const std::int64_t d = v.feature_size();
    for (std::int64_t i = 0; i < v.n(); ++i) {
        const float a = 1.0f - t[static_cast<std::size_t>(i)];
        const float* pv = v.row(i);
        const float* pt = zt.row(i);
        float* po = out.row(i);
        for (std::int64_t j = 0; j < d; ++j) po[j] = a * pv[j] + pt[j];
    }
    return out;
}

BridgeBatch make_bridge_batch(TensorBatch z0, TensorBatch z1, std::vector<float> t,
                              SigmaParam sigma, TensorBatch eps,
                              std::optional<TensorBatch> cond,
                              std::optional<TensorBatch> x1) {
    BridgeBatch b;
    b.zt = interpolate(z0, z1, t, sigma, eps);
    b.drift = drift_target(z1, b.zt, t);
    if (cond) {
        if (cond->n() != z0.n())
            throw std::invalid_argument("make_bridge_batch: cond batch size mismatch");
        if (cond->rank() == 4 && b.zt.rank() == 4 &&
            (cond->shape[2] != b.zt.shape[2] || cond->shape[3] != b.zt.shape[3]))
            throw std::invalid_argument(
                "make_bridge_batch: cond spatial dims must match the latent");
    }
    b.z0 = std::move(z0);
    b.z1 = std::move(z1);
    b.t = std::move(t);
    b.eps = std::move(eps);
    b.cond = std::move(cond);
    b.x1 = std::move(x1);
    return b;
}

}  // namespace lbm
