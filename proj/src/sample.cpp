#include "lbm/sample.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace lbm {

namespace {

TensorBatch em_update(const TensorBatch& zt, const TensorBatch& v, float t, float dt,
                      SigmaParam sigma, const TensorBatch* xi) {
    if (!v.same_shape(zt))
        throw std::invalid_argument("em_step: drift shape mismatch");
    if (!(t + dt <= 1.0f + 1e-9f))
        throw std::invalid_argument("em_step: step overshoots t = 1");
    TensorBatch out(zt.shape);
    const float noise_coeff = sigma.value * std::sqrt(dt);
    if (noise_coeff != 0.0f) {
        if (xi == nullptr || !xi->same_shape(zt))
            throw std::invalid_argument("em_step: noise shape mismatch");
        for (std::size_t k = 0; k < out.data.size(); ++k)
            out.data[k] = zt.data[k] + v.data[k] * dt + noise_coeff * xi->data[k];
    } else {
        for (std::size_t k = 0; k < out.data.size(); ++k)
            out.data[k] = zt.data[k] + v.data[k] * dt;
    }
    return out;
}

}  // namespace

TensorBatch em_step(const DriftModel& m, const TensorBatch& zt, float t, float dt,
                    SigmaParam sigma, const TensorBatch& xi, const TensorBatch* cond) {
    std::vector<float> tv(static_cast<std::size_t>(zt.n()), t);
    const TensorBatch v = forward(m, zt, tv, cond);
    return em_update(zt, v, t, dt, sigma, &xi);
}

PathResult sample_path(const DriftModel& m, const TensorBatch& z0, const SolverGrid& grid,
                       SigmaParam sigma, RngStream& stream, const TensorBatch* cond,
                       bool record_trajectory) {
    DriftFn drift = [&](const TensorBatch& z, float t) {
        std::vector<float> tv(static_cast<std::size_t>(z.n()), t);
        return forward(m, z, tv, cond);
    };
    return integrate_path(drift, z0, grid, sigma, stream, record_trajectory);
}

PathResult integrate_path(const DriftFn& drift, const TensorBatch& z0,
                          const SolverGrid& grid, SigmaParam sigma, RngStream& stream,
                          bool record_trajectory) {
    if (grid.t.empty()) throw std::invalid_argument("sample_path: empty grid");
    PathResult res;
    res.final = z0;
    if (record_trajectory) res.trajectory.push_back(res.final);
    for (int j = 0; j < grid.steps(); ++j) {
        const TensorBatch v = drift(res.final, grid.t[static_cast<std::size_t>(j)]);
        res.nfe += 1;
        if (sigma.value != 0.0f) {
            const TensorBatch xi = gaussian_noise(z0.shape, stream);
            res.final = em_update(res.final, v, grid.t[static_cast<std::size_t>(j)],
                                  grid.dt[static_cast<std::size_t>(j)], sigma, &xi);
        } else {
            res.final = em_update(res.final, v, grid.t[static_cast<std::size_t>(j)],
                                  grid.dt[static_cast<std::size_t>(j)], sigma, nullptr);
        }
        if (record_trajectory) res.trajectory.push_back(res.final);
    }
    return res;
}

TranslateResult translate(const DriftModel& m, const Codec& codec, const TensorBatch& x0,
                          const SolverGrid& grid, SigmaParam sigma, RngStream& stream,
                          const TensorBatch* cond) {
    const TensorBatch z0 = encode(codec, x0);
    std::optional<TensorBatch> cond_latent;
    if (cond != nullptr)
        cond_latent = cond->rank() == 4 ? encode(codec, *cond) : *cond;
    PathResult path = sample_path(m, z0, grid, sigma, stream,
                                  cond_latent ? &*cond_latent : nullptr);
    TranslateResult out;
    out.output = decode(codec, path.final);
    out.nfe = path.nfe;
    return out;
}

void write_pgm(const std::filesystem::path& path, const TensorBatch& x, std::int64_t index) {
    if (x.rank() != 4 || x.shape[1] != 1)
        throw std::invalid_argument("write_pgm: need a rank-4 single-channel batch");
    if (index < 0 || index >= x.n())
        throw std::invalid_argument("write_pgm: sample index out of range");
    const std::int64_t h = x.shape[2], w = x.shape[3];
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write pgm: " + path.string());
    out << "P5\n" << w << " " << h << "\n255\n";
    const float* p = x.row(index);
    for (std::int64_t k = 0; k < h * w; ++k) {
        const float v = std::min(1.0f, std::max(0.0f, p[k]));
        const auto byte = static_cast<unsigned char>(std::lround(v * 255.0f));
        out.write(reinterpret_cast<const char*>(&byte), 1);
    }
}

void write_points_csv(const std::filesystem::path& path, const TensorBatch& x) {
    if (x.rank() != 2 || x.shape[1] != 2)
        throw std::invalid_argument("write_points_csv: need an [n, 2] tensor");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write csv: " + path.string());
    out << "x,y\n";
    char buf[80];
    for (std::int64_t i = 0; i < x.n(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g\n", x.row(i)[0], x.row(i)[1]);
        out << buf;
    }
}

}  // namespace lbm
