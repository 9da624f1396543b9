#include "lbm/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lbm {

namespace {

double pair_distance(const float* a, const float* b, std::int64_t d) {
    double acc = 0.0;
    for (std::int64_t j = 0; j < d; ++j) {
        const double diff = static_cast<double>(a[j]) - b[j];
        acc += diff * diff;
    }
    return std::sqrt(acc);
}

// mean pairwise distance between all rows of a and all rows of b
double mean_cross_distance(const TensorBatch& a, const TensorBatch& b) {
    const std::int64_t d = a.feature_size();
    double acc = 0.0;
    for (std::int64_t i = 0; i < a.n(); ++i)
        for (std::int64_t j = 0; j < b.n(); ++j)
            acc += pair_distance(a.row(i), b.row(j), d);
    return acc / (static_cast<double>(a.n()) * static_cast<double>(b.n()));
}

std::vector<double> project(const TensorBatch& x, std::span<const double> dir) {
    std::vector<double> out(static_cast<std::size_t>(x.n()));
    const std::int64_t d = x.feature_size();
    for (std::int64_t i = 0; i < x.n(); ++i) {
        double acc = 0.0;
        const float* p = x.row(i);
        for (std::int64_t j = 0; j < d; ++j) acc += dir[static_cast<std::size_t>(j)] * p[j];
        out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

std::vector<double> resample(const std::vector<double>& v, std::int64_t target,
                             RngStream& stream) {
    std::vector<double> out(static_cast<std::size_t>(target));
    for (auto& x : out) {
        const auto i = std::min<std::int64_t>(
            static_cast<std::int64_t>(stream.next_uniform() * static_cast<double>(v.size())),
            static_cast<std::int64_t>(v.size()) - 1);
        x = v[static_cast<std::size_t>(i)];
    }
    return out;
}

}  // namespace

double energy_distance(const TensorBatch& a, const TensorBatch& b) {
    if (a.feature_size() != b.feature_size())
        throw std::invalid_argument("energy_distance: feature dims differ");
    if (a.n() < 2 || b.n() < 2)
        throw std::invalid_argument("energy_distance: need at least 2 samples per side");
    return 2.0 * mean_cross_distance(a, b) - mean_cross_distance(a, a) -
           mean_cross_distance(b, b);
}

double sliced_wasserstein(const TensorBatch& a, const TensorBatch& b, int projections,
                          RngStream& stream) {
    if (a.n() < 1 || b.n() < 1)
        throw std::invalid_argument("sliced_wasserstein: empty input");
    if (a.feature_size() != b.feature_size())
        throw std::invalid_argument("sliced_wasserstein: feature dims differ");
    if (projections < 1)
        throw std::invalid_argument("sliced_wasserstein: projections must be >= 1");

    const std::int64_t d = a.feature_size();
    std::vector<double> dir(static_cast<std::size_t>(d));
    double total = 0.0;
    for (int p = 0; p < projections; ++p) {
        double norm = 0.0;
        do {
            norm = 0.0;
            for (auto& c : dir) {
                c = stream.next_normal();
                norm += c * c;
            }
        } while (norm == 0.0);
        norm = std::sqrt(norm);
        for (auto& c : dir) c /= norm;

        std::vector<double> pa = project(a, dir);
        std::vector<double> pb = project(b, dir);
        if (pa.size() > pb.size()) pa = resample(pa, static_cast<std::int64_t>(pb.size()), stream);
        if (pb.size() > pa.size()) pb = resample(pb, static_cast<std::int64_t>(pa.size()), stream);
        std::sort(pa.begin(), pa.end());
        std::sort(pb.begin(), pb.end());
        double acc = 0.0;
        for (std::size_t i = 0; i < pa.size(); ++i) {
            const double diff = pa[i] - pb[i];
            acc += diff * diff;
        }
        total += std::sqrt(acc / static_cast<double>(pa.size()));
    }
    return total / projections;
}

PairedMetrics paired_metrics(const TensorBatch& pred, const TensorBatch& target) {
    if (!pred.same_shape(target))
        throw std::invalid_argument("paired_metrics: shapes differ");
    double acc = 0.0;
    for (std::size_t k = 0; k < pred.data.size(); ++k) {
        const double d = static_cast<double>(pred.data[k]) - target.data[k];
        acc += d * d;
    }
    PairedMetrics out;
    out.mse = acc / static_cast<double>(pred.data.size());
    out.psnr = out.mse == 0.0 ? std::numeric_limits<double>::infinity()
                              : 10.0 * std::log10(1.0 / out.mse);
    return out;
}

std::vector<double> conditional_coverage(const TensorBatch& outputs,
                                         const std::vector<std::vector<float>>& centers,
                                         double radius) {
    if (outputs.n() < 1) throw std::invalid_argument("conditional_coverage: empty outputs");
    if (!(radius > 0.0)) throw std::invalid_argument("conditional_coverage: radius must be > 0");
    const std::int64_t d = outputs.feature_size();
    for (const auto& c : centers)
        if (static_cast<std::int64_t>(c.size()) != d)
            throw std::invalid_argument("conditional_coverage: center dim mismatch");

    std::vector<double> fractions(centers.size(), 0.0);
    for (std::int64_t i = 0; i < outputs.n(); ++i) {
        const float* p = outputs.row(i);
        for (std::size_t c = 0; c < centers.size(); ++c) {
            double acc = 0.0;
            for (std::int64_t j = 0; j < d; ++j) {
                const double diff =
                    static_cast<double>(p[j]) - centers[c][static_cast<std::size_t>(j)];
                acc += diff * diff;
            }
            if (std::sqrt(acc) <= radius) fractions[c] += 1.0;
        }
    }
    for (auto& f : fractions) f /= static_cast<double>(outputs.n());
    return fractions;
}

bool covered(const std::vector<double>& mode_fractions) {
    for (double f : mode_fractions)
        if (f < 0.1) return false;
    return !mode_fractions.empty();
}

}  // namespace lbm
