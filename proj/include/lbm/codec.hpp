#pragma once

#include <string>
#include <string_view>

#include "lbm/tensor.hpp"

namespace lbm {

enum class CodecKind { Identity, PixelShuffle, AvgPool };

/// Fixed linear encoder/decoder pair. pixel-shuffle is a lossless
/// space-to-channel rearrangement; avg-pool is a lossy projection whose
/// decode is nearest-neighbor upsampling.
struct Codec {
    CodecKind kind{CodecKind::Identity};
    int factor{1};

    static Codec identity();
    static Codec pixel_shuffle(int f);
    static Codec avg_pool(int f);

    /// "identity", "shuffle:2", "pool:2".
    static Codec parse(std::string_view spec);
    std::string to_string() const;

    std::vector<std::int64_t> latent_shape(std::span<const std::int64_t> input_shape) const;
};

TensorBatch encode(const Codec& c, const TensorBatch& x);
TensorBatch decode(const Codec& c, const TensorBatch& z);

/// Adjoint of decode: maps an image-space gradient to latent space.
TensorBatch decode_vjp(const Codec& c, const TensorBatch& grad_out);

}  // namespace lbm
