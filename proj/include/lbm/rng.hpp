#pragma once

#include <cstdint>

#include "lbm/tensor.hpp"

namespace lbm {

/// Counter-based generator: output at (seed, counter) is a pure function of
/// the pair, so a stream can be replayed from its coordinates. Single-owner;
/// parallel work derives children via split(), never shares one stream.
struct RngStream {
    std::uint64_t seed{0};
    std::uint64_t counter{0};

    RngStream() = default;
    explicit RngStream(std::uint64_t s) : seed(s) {}

    std::uint64_t next_u64();

    /// Uniform in [0, 1), 53-bit resolution.
    double next_uniform();

    /// Standard normal via Box-Muller.
    float next_normal();

    /// Child stream with an independently mixed seed; advances this stream.
    RngStream split();
};

/// Stream for a named sub-purpose of a master seed. Distinct tags give
/// disjoint streams, so independent pipeline stages never overlap draws.
RngStream derive_stream(std::uint64_t master_seed, std::uint64_t tag);

/// I.i.d. standard-normal tensor; advances the stream.
TensorBatch gaussian_noise(std::vector<std::int64_t> shape, RngStream& stream);

}  // namespace lbm
