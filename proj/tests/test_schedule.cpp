#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "lbm/schedule.hpp"

using namespace lbm;

TEST_CASE("discrete-uniform(4) draws only the support with balanced frequencies") {
    const auto dist = TimestepDistribution::discrete_uniform(4);
    RngStream stream(42);
    const std::int64_t n = 100000;
    const auto ts = sample_t(dist, n, stream);
    std::map<float, std::int64_t> counts;
    for (float t : ts) {
        CHECK(dist.contains(t));
        counts[t] += 1;
    }
    REQUIRE(counts.size() == 4);
    const double se = std::sqrt(0.25 * 0.75 / static_cast<double>(n));
    for (float expect : {0.0f, 0.25f, 0.5f, 0.75f}) {
        const double freq = static_cast<double>(counts[expect]) / static_cast<double>(n);
        CHECK(std::abs(freq - 0.25) < 3.0 * se);
    }
}

TEST_CASE("weighted-discrete frequencies match the weights") {
    const auto dist = TimestepDistribution::weighted({0.0, 0.25, 0.5, 0.75},
                                                     {0.9, 0.025, 0.05, 0.025});
    RngStream stream(77);
    const std::int64_t n = 100000;
    const auto ts = sample_t(dist, n, stream);
    std::map<float, std::int64_t> counts;
    for (float t : ts) counts[t] += 1;
    const double weights[4] = {0.9, 0.025, 0.05, 0.025};
    const float support[4] = {0.0f, 0.25f, 0.5f, 0.75f};
    for (int i = 0; i < 4; ++i) {
        const double p = weights[i];
        const double freq =
            static_cast<double>(counts[support[i]]) / static_cast<double>(n);
        CHECK(std::abs(freq - p) < 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n)));
    }
}

TEST_CASE("uniform kind passes a KS test against U[0, 0.99]") {
    RngStream stream(11);
    const std::int64_t n = 100000;
    auto ts = sample_t(TimestepDistribution::uniform(), n, stream);
    std::sort(ts.begin(), ts.end());
    double ks = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        const double cdf = ts[static_cast<std::size_t>(i)] / 0.99;
        const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
        const double lo = static_cast<double>(i) / static_cast<double>(n);
        ks = std::max({ks, std::abs(hi - cdf), std::abs(cdf - lo)});
    }
    // 1% critical value: 1.6276 / sqrt(n)
    CHECK(ks < 1.6276 / std::sqrt(static_cast<double>(n)));
    CHECK(*std::max_element(ts.begin(), ts.end()) <= 0.99f);
}

TEST_CASE("inference grids") {
    const auto d4 = TimestepDistribution::discrete_uniform(4);
    const SolverGrid g = inference_grid(d4, 4);
    CHECK(g.t == std::vector<float>{0.0f, 0.25f, 0.5f, 0.75f});
    CHECK(g.dt == std::vector<float>{0.25f, 0.25f, 0.25f, 0.25f});

    const SolverGrid g1 = inference_grid(d4, 1);
    CHECK(g1.t == std::vector<float>{0.0f});
    CHECK(g1.dt == std::vector<float>{1.0f});

    const SolverGrid g2 = inference_grid(d4, 2);
    CHECK(g2.t == std::vector<float>{0.0f, 0.5f});

    CHECK_THROWS_WITH_AS(inference_grid(d4, 8), doctest::Contains("schedule error"),
                         std::invalid_argument);
    CHECK_NOTHROW(inference_grid(TimestepDistribution::uniform(), 8));
}

TEST_CASE("grid step sizes sum to exactly 1") {
    for (int steps : {1, 2, 3, 4, 5, 7, 16, 100}) {
        const SolverGrid g = inference_grid(TimestepDistribution::uniform(), steps);
        float sum = 0.0f;
        for (float dt : g.dt) sum += dt;
        CHECK(sum == 1.0f);
    }
}

TEST_CASE("every grid point of an aligned run has training mass") {
    for (int k : {2, 4, 8}) {
        const auto dist = TimestepDistribution::discrete_uniform(k);
        const SolverGrid g = inference_grid(dist, k);
        for (float t : g.t) CHECK(dist.contains(t));
    }
}

TEST_CASE("distribution spec strings") {
    CHECK(TimestepDistribution::parse("uniform").kind == TimestepKind::Uniform);
    const auto d = TimestepDistribution::parse("discrete:4");
    CHECK(d.kind == TimestepKind::DiscreteUniform);
    CHECK(d.support == std::vector<double>{0.0, 0.25, 0.5, 0.75});
    const auto w = TimestepDistribution::parse("weighted:0@0.9,0.25@0.025,0.5@0.05,0.75@0.025");
    CHECK(w.kind == TimestepKind::WeightedDiscrete);
    CHECK(w.weights == std::vector<double>{0.9, 0.025, 0.05, 0.025});
    CHECK(TimestepDistribution::parse(w.to_string()).support == w.support);

    CHECK_THROWS_AS(TimestepDistribution::parse("logit-normal"), std::invalid_argument);
    CHECK_THROWS_AS(TimestepDistribution::parse("weighted:0@0.5,0.25@0.1"),
                    std::invalid_argument);  // weights must sum to 1
    CHECK_THROWS_AS(TimestepDistribution::parse("weighted:0.5@0.5,0.25@0.5"),
                    std::invalid_argument);  // support must increase
    CHECK_THROWS_AS(TimestepDistribution::weighted({0.995}, {1.0}), std::invalid_argument);
}
