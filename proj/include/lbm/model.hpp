#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "lbm/rng.hpp"
#include "lbm/tensor.hpp"

namespace lbm {

/// Drift approximator: an MLP with tanh hidden layers and a linear output.
/// Input is [flatten(z_t), t, flatten(c)]; output has the latent width.
///
/// Parameter layout, per layer l with widths (in, out):
///   weights W_l row-major [out x in], then biases b_l [out].
struct DriftModel {
    std::vector<int> widths;  // input -> hidden... -> output
    int cond_dim{0};
    std::vector<float> params;
    mutable std::uint64_t forward_calls{0};

    int latent_dim() const { return widths.back(); }
    int input_dim() const { return widths.front(); }

    static std::int64_t param_count(const std::vector<int>& widths);
};

/// Weights ~ N(0, 1/w_in) per layer, biases zero. widths.front() must equal
/// widths.back() + 1 + cond_dim.
DriftModel init_params(const std::vector<int>& widths, int cond_dim,
                       RngStream& stream);

/// Predicted drift, same shape as zt. cond must be present iff cond_dim > 0.
TensorBatch forward(const DriftModel& m, const TensorBatch& zt,
                    std::span<const float> t, const TensorBatch* cond = nullptr);

/// Gradient of sum_i <forward(x_i), upstream_i> w.r.t. params, by reverse
/// accumulation (double accumulators, float result).
std::vector<float> backward(const DriftModel& m, const TensorBatch& zt,
                            std::span<const float> t, const TensorBatch* cond,
                            const TensorBatch& upstream);

/// Checkpoint: params as a [1, P] tensor file plus "<path>.meta" sidecar
/// text listing widths and cond_dim.
void save_checkpoint(const std::filesystem::path& path, const DriftModel& m);
DriftModel load_checkpoint(const std::filesystem::path& path);

}  // namespace lbm
