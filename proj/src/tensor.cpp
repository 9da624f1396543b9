#include "lbm/tensor.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace lbm {

namespace {

constexpr char kMagic[4] = {'L', 'B', 'M', 'T'};

void put_u64_le(std::ofstream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64_le(std::ifstream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

}  // namespace

std::int64_t shape_size(std::span<const std::int64_t> shape) {
    std::int64_t total = 1;
    for (auto d : shape) total *= d;
    return total;
}

void validate_shape(std::span<const std::int64_t> shape) {
    if (shape.size() != 2 && shape.size() != 4)
        throw std::invalid_argument("tensor shape must have rank 2 or 4, got rank " +
                                    std::to_string(shape.size()));
    for (auto d : shape)
        if (d < 1)
            throw std::invalid_argument("tensor dims must be >= 1, got " + std::to_string(d));
}

TensorBatch::TensorBatch(std::vector<std::int64_t> s) : shape(std::move(s)) {
    validate_shape(shape);
    data.assign(static_cast<std::size_t>(shape_size(shape)), 0.0f);
}

TensorBatch::TensorBatch(std::vector<std::int64_t> s, std::vector<float> values)
    : shape(std::move(s)), data(std::move(values)) {
    validate_shape(shape);
    if (shape_size(shape) != static_cast<std::int64_t>(data.size()))
        throw std::invalid_argument("tensor payload length does not match shape");
}

TensorBatch TensorBatch::full(std::vector<std::int64_t> s, float value) {
    TensorBatch t(std::move(s));
    for (auto& x : t.data) x = value;
    return t;
}

bool TensorBatch::all_finite() const {
    for (float x : data)
        if (!std::isfinite(x)) return false;
    return true;
}

void write_tensor(const std::filesystem::path& path, const TensorBatch& t) {
    validate_shape(t.shape);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out.write(kMagic, 4);
    unsigned char rank = static_cast<unsigned char>(t.shape.size());
    out.write(reinterpret_cast<const char*>(&rank), 1);
    for (auto d : t.shape) put_u64_le(out, static_cast<std::uint64_t>(d));
    for (float x : t.data) {
        std::uint32_t bits = std::bit_cast<std::uint32_t>(x);
        unsigned char b[4];
        for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
        out.write(reinterpret_cast<const char*>(b), 4);
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

TensorBatch read_tensor(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("bad magic bytes in " + path.string());
    unsigned char rank = 0;
    in.read(reinterpret_cast<char*>(&rank), 1);
    if (!in || (rank != 2 && rank != 4))
        throw std::runtime_error("bad tensor rank in " + path.string());
    std::vector<std::int64_t> shape(rank);
    for (auto& d : shape) {
        d = static_cast<std::int64_t>(get_u64_le(in));
        if (!in || d < 1) throw std::runtime_error("bad tensor dims in " + path.string());
    }
    const std::int64_t count = shape_size(shape);
    std::vector<float> data(static_cast<std::size_t>(count));
    for (auto& x : data) {
        unsigned char b[4];
        in.read(reinterpret_cast<char*>(b), 4);
        if (!in) throw std::runtime_error("truncated tensor payload in " + path.string());
        std::uint32_t bits = 0;
        for (int i = 0; i < 4; ++i) bits |= static_cast<std::uint32_t>(b[i]) << (8 * i);
        x = std::bit_cast<float>(bits);
    }
    in.peek();
    if (!in.eof()) throw std::runtime_error("trailing bytes after payload in " + path.string());
    return TensorBatch(std::move(shape), std::move(data));
}

}  // namespace lbm
