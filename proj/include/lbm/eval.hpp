#pragma once

#include <vector>

#include "lbm/rng.hpp"
#include "lbm/tensor.hpp"

namespace lbm {

/// Energy distance 2 E||A-B|| - E||A-A'|| - E||B-B'|| via exact pairwise
/// sums (V-statistic). Rows are treated as feature vectors.
double energy_distance(const TensorBatch& a, const TensorBatch& b);

/// Average over random unit directions of the 1-D W2 between sorted
/// projections. Unequal sizes: the larger set is resampled down.
double sliced_wasserstein(const TensorBatch& a, const TensorBatch& b,
                          int projections, RngStream& stream);

struct PairedMetrics {
    double mse{0.0};
    double psnr{0.0};  // +inf sentinel when mse == 0
};
PairedMetrics paired_metrics(const TensorBatch& pred, const TensorBatch& target);

/// Fraction of outputs within `radius` of each center. "Covered" means
/// every fraction >= 0.1.
std::vector<double> conditional_coverage(const TensorBatch& outputs,
                                         const std::vector<std::vector<float>>& centers,
                                         double radius);
bool covered(const std::vector<double>& mode_fractions);

}  // namespace lbm
