#include "lbm/rng.hpp"

#include <cmath>
#include <numbers>

namespace lbm {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t RngStream::next_u64() {
    counter += 1;
    return mix64(seed + counter * kGamma);
}

double RngStream::next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

float RngStream::next_normal() {
    // u1 in (0, 1] keeps the log finite.
    const double u1 = 1.0 - next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return static_cast<float>(r * std::cos(2.0 * std::numbers::pi * u2));
}

RngStream RngStream::split() {
    return RngStream(mix64(next_u64() ^ 0xA5A5A5A5A5A5A5A5ULL));
}

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t tag) {
    return RngStream(mix64(mix64(master_seed ^ kGamma) + tag * kGamma));
}

TensorBatch gaussian_noise(std::vector<std::int64_t> shape, RngStream& stream) {
    validate_shape(shape);
    TensorBatch out(std::move(shape));
    for (auto& x : out.data) x = stream.next_normal();
    return out;
}

}  // namespace lbm
