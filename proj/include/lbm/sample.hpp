#pragma once

#include <functional>
#include <vector>

#include "lbm/bridge.hpp"
#include "lbm/codec.hpp"
#include "lbm/model.hpp"
#include "lbm/schedule.hpp"

namespace lbm {

/// One explicit Euler-Maruyama step: zt + v dt + sigma sqrt(dt) xi.
/// The noise term is skipped bitwise when sigma == 0.
TensorBatch em_step(const DriftModel& m, const TensorBatch& zt, float t,
                    float dt, SigmaParam sigma, const TensorBatch& xi,
                    const TensorBatch* cond = nullptr);

struct PathResult {
    TensorBatch final;
    std::uint64_t nfe{0};
    std::vector<TensorBatch> trajectory;  // steps+1 states when recorded
};

/// Sequential em_steps over the grid. sigma == 0 draws no noise at all,
/// so the result is independent of the stream.
PathResult sample_path(const DriftModel& m, const TensorBatch& z0,
                       const SolverGrid& grid, SigmaParam sigma,
                       RngStream& stream, const TensorBatch* cond = nullptr,
                       bool record_trajectory = false);

/// Euler-Maruyama with an arbitrary drift field (used with the closed-form
/// test drifts). Counts drift evaluations like sample_path.
using DriftFn = std::function<TensorBatch(const TensorBatch& z, float t)>;
PathResult integrate_path(const DriftFn& drift, const TensorBatch& z0,
                          const SolverGrid& grid, SigmaParam sigma,
                          RngStream& stream, bool record_trajectory = false);

struct TranslateResult {
    TensorBatch output;
    std::uint64_t nfe{0};
};

/// encode -> sample_path -> decode. Rank-4 conditions are encoded with the
/// same codec so they share the latent spatial dims.
TranslateResult translate(const DriftModel& m, const Codec& codec,
                          const TensorBatch& x0, const SolverGrid& grid,
                          SigmaParam sigma, RngStream& stream,
                          const TensorBatch* cond = nullptr);

/// Binary PGM (P5, maxval 255), linear [0,1] -> [0,255] clamp. Single
/// image: x must be rank-4 with one channel; writes sample `index`.
void write_pgm(const std::filesystem::path& path, const TensorBatch& x,
               std::int64_t index);

/// CSV with one "x,y" row per sample; x must be [n, 2].
void write_points_csv(const std::filesystem::path& path, const TensorBatch& x);

}  // namespace lbm
