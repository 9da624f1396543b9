#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "lbm/rng.hpp"
#include "lbm/tensor.hpp"

namespace lbm {

struct PairBatch {
    TensorBatch x0;
    TensorBatch x1;
    std::optional<TensorBatch> cond;
};

/// Procedural paired-distribution generator. Deterministic given (n, stream);
/// paired tasks return index-aligned couples.
struct PairedTask {
    std::string name;
    int rank{2};
    bool paired{false};
    bool conditional{false};
    std::vector<std::int64_t> x_shape;     // per-sample dims, batch excluded
    std::vector<std::int64_t> cond_shape;  // empty when unconditional
    std::function<PairBatch(std::int64_t n, RngStream& stream)> sample;
};

/// Independent coupling of N(mu0, s0^2) and N(mu1, s1^2), 1-D.
PairedTask gauss1d(double mu0, double s0, double mu1, double s1);

/// x0 ~ N(0, I2); x1 uniform on a radius-2 circle with radial noise 0.05.
PairedTask rings2d();

/// x0 = (0,0) point mass; x1 an equal mixture of N((-2,0), 0.1) and
/// N((+2,0), 0.1) (std 0.1 per axis). The one-to-many task.
PairedTask point_to_bimodal();

/// x1 = smooth random background; x0 = x1 with a random half-side square
/// replaced by uniform noise. Paired.
PairedTask inpaint_toy(int side = 16);

/// Conditional: x0 = bright square on gray ground, c = single-blob light
/// map (left or right), x1 = x0 plus a dark bar opposite the light.
PairedTask shadow_toy(int side = 12);

/// "gauss1d:mu0,s0,mu1,s1", "rings2d", "point_to_bimodal", "inpaint16",
/// "shadow12".
PairedTask make_task(std::string_view name);

}  // namespace lbm
