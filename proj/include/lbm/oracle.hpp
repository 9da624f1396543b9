#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "lbm/rng.hpp"

namespace lbm {

/// 1-D Gaussian endpoints under independent coupling, with the bridge
/// noise scale. The ground-truth task for oracle checks.
struct GaussianTaskSpec {
    double mu0{0.0};
    double s0{1.0};
    double mu1{2.0};
    double s1{1.0};
    double sigma{0.1};

    /// "mu0,s0,mu1,s1,sigma".
    static GaussianTaskSpec parse(std::string_view spec);
};

/// Mean and variance of the interpolated state z_t under the spec.
double zt_marginal_mean(const GaussianTaskSpec& spec, double t);
double zt_marginal_var(const GaussianTaskSpec& spec, double t);

/// Closed-form projected drift: (E[z1 | zt = z] - z) / (1 - t) for jointly
/// Gaussian (zt, z1). Requires 0 <= t < 1.
double gaussian_drift(const GaussianTaskSpec& spec, double z, double t);

/// One bin of the Monte-Carlo drift estimator. z_mean is the empirical
/// mean of z_t inside the bin; the closed form is affine in z, so the
/// binned estimate is unbiased at z_mean (not at the geometric center).
struct DriftBin {
    double z_center{0.0};
    double z_mean{0.0};
    double drift{0.0};
    double stderr_{0.0};
    std::int64_t count{0};
};

/// Model-free estimator: draws n (z0, z1, eps) triples, forms z_t and raw
/// drifts, averages within equal-width z_t bins spanning mean +/- 4 sd of
/// the z_t marginal. Empty bins are reported with count 0.
std::vector<DriftBin> mc_binned_drift(const GaussianTaskSpec& spec, double t,
                                      std::int64_t n, int bins,
                                      RngStream& stream);

/// Same estimator over an explicit bin range [lo, hi].
std::vector<DriftBin> mc_binned_drift_range(const GaussianTaskSpec& spec,
                                            double t, std::int64_t n, int bins,
                                            double lo, double hi,
                                            RngStream& stream);

}  // namespace lbm
