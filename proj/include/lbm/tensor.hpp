#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace lbm {

/// Dense rank-2 ([n, d]) or rank-4 ([n, c, h, w]) batch of 32-bit reals,
/// flat row-major storage. Values are immutable once a batch has been
/// handed to another thread.
struct TensorBatch {
    std::vector<std::int64_t> shape;
    std::vector<float> data;

    TensorBatch() = default;
    explicit TensorBatch(std::vector<std::int64_t> s);
    TensorBatch(std::vector<std::int64_t> s, std::vector<float> values);

    static TensorBatch full(std::vector<std::int64_t> s, float value);

    std::int64_t rank() const { return static_cast<std::int64_t>(shape.size()); }
    std::int64_t n() const { return shape.empty() ? 0 : shape[0]; }
    std::int64_t size() const { return static_cast<std::int64_t>(data.size()); }
    std::int64_t feature_size() const { return n() == 0 ? 0 : size() / n(); }

    float* row(std::int64_t i) { return data.data() + i * feature_size(); }
    const float* row(std::int64_t i) const { return data.data() + i * feature_size(); }

    bool same_shape(const TensorBatch& other) const { return shape == other.shape; }
    bool all_finite() const;
};

std::int64_t shape_size(std::span<const std::int64_t> shape);

/// Rejects rank != 2/4 and non-positive dims.
void validate_shape(std::span<const std::int64_t> shape);

/// File format: magic "LBMT", 1 byte rank, rank x 8-byte little-endian
/// unsigned dims, then little-endian 32-bit-real payload, row-major.
void write_tensor(const std::filesystem::path& path, const TensorBatch& t);
TensorBatch read_tensor(const std::filesystem::path& path);

}  // namespace lbm
