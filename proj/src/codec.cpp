#include "lbm/codec.hpp"

#include <stdexcept>
#include <string>

namespace lbm {

namespace {

void check_rank4_divisible(const TensorBatch& x, int f, const char* what) {
    if (x.rank() != 4)
        throw std::invalid_argument(std::string(what) + ": non-identity codecs need rank-4 input");
    if (x.shape[2] % f != 0 || x.shape[3] % f != 0)
        throw std::invalid_argument(std::string(what) + ": spatial dims not divisible by factor " +
                                    std::to_string(f));
}

}  // namespace

Codec Codec::identity() { return Codec{CodecKind::Identity, 1}; }

Codec Codec::pixel_shuffle(int f) {
    if (f < 1) throw std::invalid_argument("pixel-shuffle factor must be >= 1");
    return Codec{CodecKind::PixelShuffle, f};
}

Codec Codec::avg_pool(int f) {
    if (f < 1) throw std::invalid_argument("avg-pool factor must be >= 1");
    return Codec{CodecKind::AvgPool, f};
}

Codec Codec::parse(std::string_view spec) {
    if (spec == "identity") return identity();
    auto factor_of = [&](std::string_view rest) {
        int f = 0;
        for (char c : rest) {
            if (c < '0' || c > '9')
                throw std::invalid_argument("bad codec factor in '" + std::string(spec) + "'");
            f = f * 10 + (c - '0');
        }
        if (rest.empty() || f < 1)
            throw std::invalid_argument("bad codec factor in '" + std::string(spec) + "'");
        return f;
    };
    if (spec.rfind("shuffle:", 0) == 0) return pixel_shuffle(factor_of(spec.substr(8)));
    if (spec.rfind("pool:", 0) == 0) return avg_pool(factor_of(spec.substr(5)));
    throw std::invalid_argument("unknown codec: '" + std::string(spec) + "'");
}

std::string Codec::to_string() const {
    switch (kind) {
        case CodecKind::Identity:
            return "identity";
        case CodecKind::PixelShuffle:
            return "shuffle:" + std::to_string(factor);
        case CodecKind::AvgPool:
            return "pool:" + std::to_string(factor);
    }
    return "identity";
}

std::vector<std::int64_t> Codec::latent_shape(std::span<const std::int64_t> input_shape) const {
    std::vector<std::int64_t> s(input_shape.begin(), input_shape.end());
    if (kind == CodecKind::Identity) return s;
    if (s.size() != 4)
        throw std::invalid_argument("non-identity codecs need rank-4 input");
    if (s[2] % factor != 0 || s[3] % factor != 0)
        throw std::invalid_argument("spatial dims not divisible by codec factor");
    if (kind == CodecKind::PixelShuffle) {
        s[1] *= static_cast<std::int64_t>(factor) * factor;
    }
    s[2] /= factor;
    s[3] /= factor;
    return s;
}

TensorBatch encode(const Codec& c, const TensorBatch& x) {
    if (c.kind == CodecKind::Identity) return x;
    check_rank4_divisible(x, c.factor, "encode");
    const std::int64_t n = x.shape[0], ch = x.shape[1], h = x.shape[2], w = x.shape[3];
    const int f = c.factor;
    const std::int64_t lh = h / f, lw = w / f;

    if (c.kind == CodecKind::PixelShuffle) {
        TensorBatch out({n, ch * f * f, lh, lw});
        for (std::int64_t s = 0; s < n; ++s)
            for (std::int64_t cc = 0; cc < ch; ++cc)
                for (std::int64_t y = 0; y < lh; ++y)
                    for (std::int64_t xx = 0; xx < lw; ++xx)
                        for (int fy = 0; fy < f; ++fy)
                            for (int fx = 0; fx < f; ++fx) {
                                const std::int64_t oc = (cc * f + fy) * f + fx;
                                out.data[((s * ch * f * f + oc) * lh + y) * lw + xx] =
                                    x.data[((s * ch + cc) * h + y * f + fy) * w + xx * f + fx];
                            }
        return out;
    }

    TensorBatch out({n, ch, lh, lw});
    const float inv = 1.0f / static_cast<float>(f * f);
    for (std::int64_t s = 0; s < n; ++s)
        for (std::int64_t cc = 0; cc < ch; ++cc)
            for (std::int64_t y = 0; y < lh; ++y)
                for (std::int64_t xx = 0; xx < lw; ++xx) {
                    float sum = 0.0f;
                    for (int fy = 0; fy < f; ++fy)
                        for (int fx = 0; fx < f; ++fx)
                            sum += x.data[((s * ch + cc) * h + y * f + fy) * w + xx * f + fx];
                    out.data[((s * ch + cc) * lh + y) * lw + xx] = sum * inv;
                }
    return out;
}

TensorBatch decode(const Codec& c, const TensorBatch& z) {
    if (c.kind == CodecKind::Identity) return z;
    if (z.rank() != 4)
        throw std::invalid_argument("decode: non-identity codecs need rank-4 latents");
    const int f = c.factor;
    const std::int64_t n = z.shape[0], lc = z.shape[1], lh = z.shape[2], lw = z.shape[3];

    if (c.kind == CodecKind::PixelShuffle) {
        if (lc % (f * f) != 0)
            throw std::invalid_argument("decode: latent channels not divisible by factor^2");
        const std::int64_t ch = lc / (f * f);
        TensorBatch out({n, ch, lh * f, lw * f});
        for (std::int64_t s = 0; s < n; ++s)
            for (std::int64_t cc = 0; cc < ch; ++cc)
                for (std::int64_t y = 0; y < lh; ++y)
                    for (std::int64_t xx = 0; xx < lw; ++xx)
                        for (int fy = 0; fy < f; ++fy)
                            for (int fx = 0; fx < f; ++fx) {
                                const std::int64_t ic = (cc * f + fy) * f + fx;
                                out.data[((s * ch + cc) * lh * f + y * f + fy) * lw * f +
                                         xx * f + fx] =
                                    z.data[((s * lc + ic) * lh + y) * lw + xx];
                            }
        return out;
    }

    TensorBatch out({n, lc, lh * f, lw * f});
    for (std::int64_t s = 0; s < n; ++s)
        for (std::int64_t cc = 0; cc < lc; ++cc)
            for (std::int64_t y = 0; y < lh * f; ++y)
                for (std::int64_t xx = 0; xx < lw * f; ++xx)
                    out.data[((s * lc + cc) * lh * f + y) * lw * f + xx] =
                        z.data[((s * lc + cc) * lh + y / f) * lw + xx / f];
    return out;
}

TensorBatch decode_vjp(const Codec& c, const TensorBatch& grad_out) {
    if (c.kind == CodecKind::Identity) return grad_out;
    if (c.kind == CodecKind::PixelShuffle) return encode(c, grad_out);

    // Nearest-neighbor upsampling broadcasts each latent cell to f x f
    // pixels, so its adjoint sums the block.
    if (grad_out.rank() != 4)
        throw std::invalid_argument("decode_vjp: rank-4 gradient required");
    const int f = c.factor;
    const std::int64_t n = grad_out.shape[0], ch = grad_out.shape[1];
    const std::int64_t h = grad_out.shape[2], w = grad_out.shape[3];
    if (h % f != 0 || w % f != 0)
        throw std::invalid_argument("decode_vjp: spatial dims not divisible by factor");
    TensorBatch out({n, ch, h / f, w / f});
    for (std::int64_t s = 0; s < n; ++s)
        for (std::int64_t cc = 0; cc < ch; ++cc)
            for (std::int64_t y = 0; y < h; ++y)
                for (std::int64_t xx = 0; xx < w; ++xx)
                    out.data[((s * ch + cc) * (h / f) + y / f) * (w / f) + xx / f] +=
                        grad_out.data[((s * ch + cc) * h + y) * w + xx];
    return out;
}

}  // namespace lbm
