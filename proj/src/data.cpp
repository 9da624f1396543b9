#include "lbm/data.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lbm {

namespace {

void check_n(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("task sample: n must be >= 1");
}

double parse_number(std::string_view s, const char* what) {
    char* end = nullptr;
    std::string tmp(s);
    double v = std::strtod(tmp.c_str(), &end);
    if (end != tmp.c_str() + tmp.size() || tmp.empty())
        throw std::invalid_argument(std::string("cannot parse ") + what + ": '" + tmp + "'");
    return v;
}

std::int64_t uniform_index(RngStream& stream, std::int64_t count) {
    const auto i = static_cast<std::int64_t>(stream.next_uniform() * static_cast<double>(count));
    return std::min(i, count - 1);
}

}  // namespace

PairedTask gauss1d(double mu0, double s0, double mu1, double s1) {
    if (!(s0 > 0.0) || !(s1 > 0.0))
        throw std::invalid_argument("gauss1d: scales must be positive");
    PairedTask task;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "gauss1d:%.12g,%.12g,%.12g,%.12g", mu0, s0, mu1, s1);
    task.name = buf;
    task.rank = 2;
    task.paired = false;
    task.x_shape = {1};
    task.sample = [=](std::int64_t n, RngStream& stream) {
        check_n(n);
        PairBatch b;
        b.x0 = TensorBatch({n, 1});
        b.x1 = TensorBatch({n, 1});
        for (auto& v : b.x0.data)
            v = static_cast<float>(mu0 + s0 * stream.next_normal());
        for (auto& v : b.x1.data)
            v = static_cast<float>(mu1 + s1 * stream.next_normal());
        return b;
    };
    return task;
}

PairedTask rings2d() {
    PairedTask task;
    task.name = "rings2d";
    task.rank = 2;
    task.paired = false;
    task.x_shape = {2};
    task.sample = [](std::int64_t n, RngStream& stream) {
        check_n(n);
        PairBatch b;
        b.x0 = gaussian_noise({n, 2}, stream);
        b.x1 = TensorBatch({n, 2});
        for (std::int64_t i = 0; i < n; ++i) {
            const double theta = 2.0 * std::numbers::pi * stream.next_uniform();
            const double r = 2.0 + 0.05 * stream.next_normal();
            b.x1.data[static_cast<std::size_t>(2 * i)] = static_cast<float>(r * std::cos(theta));
            b.x1.data[static_cast<std::size_t>(2 * i + 1)] =
                static_cast<float>(r * std::sin(theta));
        }
        return b;
    };
    return task;
}

PairedTask point_to_bimodal() {
    PairedTask task;
    task.name = "point_to_bimodal";
    task.rank = 2;
    task.paired = false;
    task.x_shape = {2};
    task.sample = [](std::int64_t n, RngStream& stream) {
        check_n(n);
        PairBatch b;
        b.x0 = TensorBatch({n, 2});  // point mass at the origin
        b.x1 = TensorBatch({n, 2});
        for (std::int64_t i = 0; i < n; ++i) {
            const float cx = stream.next_uniform() < 0.5 ? -2.0f : 2.0f;
            b.x1.data[static_cast<std::size_t>(2 * i)] = cx + 0.1f * stream.next_normal();
            b.x1.data[static_cast<std::size_t>(2 * i + 1)] = 0.1f * stream.next_normal();
        }
        return b;
    };
    return task;
}

PairedTask inpaint_toy(int side) {
    if (side < 8 || side % 4 != 0)
        throw std::invalid_argument("inpaint_toy: side must be >= 8 and divisible by 4");
    PairedTask task;
    task.name = "inpaint" + std::to_string(side);
    task.rank = 4;
    task.paired = true;
    task.x_shape = {1, side, side};

    // nonzero low-frequency (kx, ky) pairs with entries in {0, 1, 2}
    static constexpr int kFreq[8][2] = {{0, 1}, {0, 2}, {1, 0}, {1, 1},
                                        {1, 2}, {2, 0}, {2, 1}, {2, 2}};

    task.sample = [side](std::int64_t n, RngStream& stream) {
        check_n(n);
        PairBatch b;
        b.x1 = TensorBatch({n, 1, side, side});
        b.x0 = TensorBatch({n, 1, side, side});
        const int mask = side / 2;
        const double two_pi = 2.0 * std::numbers::pi;
        std::vector<double> img(static_cast<std::size_t>(side) * side);
        for (std::int64_t i = 0; i < n; ++i) {
            std::fill(img.begin(), img.end(), 0.0);
            for (int comp = 0; comp < 3; ++comp) {
                const auto& f = kFreq[uniform_index(stream, 8)];
                const double amp = 0.5 + 0.5 * stream.next_uniform();
                const double phase = two_pi * stream.next_uniform();
                for (int y = 0; y < side; ++y)
                    for (int x = 0; x < side; ++x)
                        img[static_cast<std::size_t>(y * side + x)] +=
                            amp * std::cos(two_pi * (f[0] * x + f[1] * y) / side + phase);
            }
            double lo = img[0], hi = img[0];
            for (double v : img) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            float* p1 = b.x1.row(i);
            for (int k = 0; k < side * side; ++k)
                p1[k] = hi - lo > 1e-12
                            ? static_cast<float>((img[static_cast<std::size_t>(k)] - lo) /
                                                 (hi - lo))
                            : 0.5f;

            float* p0 = b.x0.row(i);
            for (int k = 0; k < side * side; ++k) p0[k] = p1[k];
            const auto y0 = uniform_index(stream, side - mask + 1);
            const auto x0 = uniform_index(stream, side - mask + 1);
            for (std::int64_t y = y0; y < y0 + mask; ++y)
                for (std::int64_t x = x0; x < x0 + mask; ++x)
                    p0[y * side + x] = static_cast<float>(stream.next_uniform());
        }
        return b;
    };
    return task;
}

PairedTask shadow_toy(int side) {
    if (side < 8) throw std::invalid_argument("shadow_toy: side must be >= 8");
    PairedTask task;
    task.name = "shadow" + std::to_string(side);
    task.rank = 4;
    task.paired = true;
    task.conditional = true;
    task.x_shape = {1, side, side};
    task.cond_shape = {1, side, side};

    task.sample = [side](std::int64_t n, RngStream& stream) {
        check_n(n);
        PairBatch b;
        b.x0 = TensorBatch({n, 1, side, side});
        b.x1 = TensorBatch({n, 1, side, side});
        b.cond = TensorBatch({n, 1, side, side});

        const int sq_lo = side / 2 - 2, sq_hi = side / 2 + 1;  // 4x4 object band
        const double cy = (side - 1) / 2.0;
        const double blob_var = 2.0 * 1.5 * 1.5;
        for (std::int64_t i = 0; i < n; ++i) {
            const float brightness = 0.8f + 0.2f * static_cast<float>(stream.next_uniform());
            const bool light_left = stream.next_uniform() < 0.5;

            float* p0 = b.x0.row(i);
            for (int k = 0; k < side * side; ++k) p0[k] = 0.5f;
            for (int y = sq_lo; y <= sq_hi; ++y)
                for (int x = sq_lo; x <= sq_hi; ++x) p0[y * side + x] = brightness;

            const double cx = light_left ? side / 4 : side - 1 - side / 4;
            float* pc = b.cond->row(i);
            for (int y = 0; y < side; ++y)
                for (int x = 0; x < side; ++x)
                    pc[y * side + x] = static_cast<float>(
                        std::exp(-((x - cx) * (x - cx) + (y - cy) * (y - cy)) / blob_var));

            float* p1 = b.x1.row(i);
            for (int k = 0; k < side * side; ++k) p1[k] = p0[k];
            const int bar_lo = light_left ? side - 3 : 1;
            for (int y = sq_lo; y <= sq_hi; ++y)
                for (int x = bar_lo; x < bar_lo + 2; ++x) p1[y * side + x] = 0.2f;
        }
        return b;
    };
    return task;
}

PairedTask make_task(std::string_view name) {
    if (name.rfind("gauss1d:", 0) == 0) {
        std::string_view rest = name.substr(8);
        double vals[4];
        for (int i = 0; i < 4; ++i) {
            const auto comma = rest.find(',');
            if ((i < 3) == (comma == std::string_view::npos))
                throw std::invalid_argument("gauss1d task needs mu0,s0,mu1,s1");
            vals[i] = parse_number(rest.substr(0, comma), "gauss1d parameter");
            if (comma != std::string_view::npos) rest = rest.substr(comma + 1);
        }
        return gauss1d(vals[0], vals[1], vals[2], vals[3]);
    }
    if (name == "rings2d") return rings2d();
    if (name == "point_to_bimodal") return point_to_bimodal();
    if (name.rfind("inpaint", 0) == 0)
        return inpaint_toy(static_cast<int>(parse_number(name.substr(7), "inpaint side")));
    if (name.rfind("shadow", 0) == 0)
        return shadow_toy(static_cast<int>(parse_number(name.substr(6), "shadow side")));
    throw std::invalid_argument("unknown task: '" + std::string(name) + "'");
}

}  // namespace lbm
