#include "lbm/oracle.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace lbm {

GaussianTaskSpec GaussianTaskSpec::parse(std::string_view spec) {
    double vals[5];
    std::string_view rest = spec;
    for (int i = 0; i < 5; ++i) {
        const auto comma = rest.find(',');
        if ((i < 4) == (comma == std::string_view::npos))
            throw std::invalid_argument("gaussian spec needs mu0,s0,mu1,s1,sigma");
        std::string item(rest.substr(0, comma));
        char* end = nullptr;
        vals[i] = std::strtod(item.c_str(), &end);
        if (end != item.c_str() + item.size() || item.empty())
            throw std::invalid_argument("cannot parse gaussian spec field: '" + item + "'");
        if (comma != std::string_view::npos) rest = rest.substr(comma + 1);
    }
    if (!(vals[1] > 0.0) || !(vals[3] > 0.0))
        throw std::invalid_argument("gaussian spec scales must be positive");
    if (vals[4] < 0.0) throw std::invalid_argument("gaussian spec sigma must be >= 0");
    return GaussianTaskSpec{vals[0], vals[1], vals[2], vals[3], vals[4]};
}

double zt_marginal_mean(const GaussianTaskSpec& spec, double t) {
    return (1.0 - t) * spec.mu0 + t * spec.mu1;
}

double zt_marginal_var(const GaussianTaskSpec& spec, double t) {
    return (1.0 - t) * (1.0 - t) * spec.s0 * spec.s0 + t * t * spec.s1 * spec.s1 +
           spec.sigma * spec.sigma * t * (1.0 - t);
}

double gaussian_drift(const GaussianTaskSpec& spec, double z, double t) {
    if (!(t >= 0.0 && t < 1.0))
        throw std::invalid_argument("gaussian_drift: t must lie in [0, 1)");
    const double var = zt_marginal_var(spec, t);
    const double cov = t * spec.s1 * spec.s1;
    const double cond_mean = spec.mu1 + (cov / var) * (z - zt_marginal_mean(spec, t));
    return (cond_mean - z) / (1.0 - t);
}

std::vector<DriftBin> mc_binned_drift_range(const GaussianTaskSpec& spec, double t,
                                            std::int64_t n, int bins, double lo, double hi,
                                            RngStream& stream) {
    if (!(t >= 0.0 && t < 1.0))
        throw std::invalid_argument("mc_binned_drift: t must lie in [0, 1)");
    if (bins < 1) throw std::invalid_argument("mc_binned_drift: bins must be >= 1");
    if (n < static_cast<std::int64_t>(bins) * 50)
        throw std::invalid_argument("mc_binned_drift: need n >= 50 draws per bin");
    if (!(hi > lo)) throw std::invalid_argument("mc_binned_drift: empty bin range");

    const double width = (hi - lo) / bins;
    std::vector<double> sum(static_cast<std::size_t>(bins), 0.0);
    std::vector<double> sum_sq(static_cast<std::size_t>(bins), 0.0);
    std::vector<double> sum_z(static_cast<std::size_t>(bins), 0.0);
    std::vector<std::int64_t> count(static_cast<std::size_t>(bins), 0);

    const double noise_coeff = spec.sigma * std::sqrt(t * (1.0 - t));
    for (std::int64_t i = 0; i < n; ++i) {
        const double z0 = spec.mu0 + spec.s0 * stream.next_normal();
        const double z1 = spec.mu1 + spec.s1 * stream.next_normal();
        const double eps = stream.next_normal();
        const double zt = (1.0 - t) * z0 + t * z1 + noise_coeff * eps;
        if (zt < lo || zt >= hi) continue;
        const auto b = static_cast<std::size_t>((zt - lo) / width);
        const double raw = (z1 - zt) / (1.0 - t);
        sum[b] += raw;
        sum_sq[b] += raw * raw;
        sum_z[b] += zt;
        count[b] += 1;
    }

    std::vector<DriftBin> out(static_cast<std::size_t>(bins));
    for (int b = 0; b < bins; ++b) {
        DriftBin& bin = out[static_cast<std::size_t>(b)];
        bin.z_center = lo + (b + 0.5) * width;
        bin.count = count[static_cast<std::size_t>(b)];
        if (bin.count > 0) {
            const double c = static_cast<double>(bin.count);
            bin.z_mean = sum_z[static_cast<std::size_t>(b)] / c;
            bin.drift = sum[static_cast<std::size_t>(b)] / c;
            if (bin.count > 1) {
                const double var =
                    (sum_sq[static_cast<std::size_t>(b)] - c * bin.drift * bin.drift) /
                    (c - 1.0);
                bin.stderr_ = std::sqrt(std::max(var, 0.0) / c);
            }
        }
    }
    return out;
}

std::vector<DriftBin> mc_binned_drift(const GaussianTaskSpec& spec, double t,
                                      std::int64_t n, int bins, RngStream& stream) {
    const double mean = zt_marginal_mean(spec, t);
    const double sd = std::sqrt(zt_marginal_var(spec, t));
    return mc_binned_drift_range(spec, t, n, bins, mean - 4.0 * sd, mean + 4.0 * sd, stream);
}

}  // namespace lbm
