#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lbm/rng.hpp"

namespace lbm {

enum class TimestepKind { Uniform, DiscreteUniform, WeightedDiscrete };

/// Training-time law over t. Uniform draws from [0, 0.99]; discrete kinds
/// draw from a finite support in [0, 0.99]. t = 1 is never in any support.
struct TimestepDistribution {
    TimestepKind kind{TimestepKind::Uniform};
    std::vector<double> support;
    std::vector<double> weights;

    static TimestepDistribution uniform();
    static TimestepDistribution discrete_uniform(int k);
    static TimestepDistribution weighted(std::vector<double> support,
                                         std::vector<double> weights);

    /// "uniform", "discrete:4", or "weighted:0@0.9,0.25@0.025,...".
    static TimestepDistribution parse(std::string_view spec);
    std::string to_string() const;

    bool is_discrete() const { return kind != TimestepKind::Uniform; }

    /// Exact membership of a sampled t in the (float-cast) support.
    bool contains(float t) const;
};

std::vector<float> sample_t(const TimestepDistribution& dist, std::int64_t n,
                            RngStream& stream);

/// Euler grid over [0, 1]: evaluation times t[j] and step sizes dt[j].
/// dt entries telescope so their running float sum lands on exactly 1.
struct SolverGrid {
    std::vector<float> t;
    std::vector<float> dt;

    int steps() const { return static_cast<int>(t.size()); }
};

/// {i/steps} with dt = 1/steps. Discrete kinds cap steps at their support
/// size; exceeding it is a schedule error.
SolverGrid inference_grid(const TimestepDistribution& dist, int steps);

}  // namespace lbm
