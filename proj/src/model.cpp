#include "lbm/model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace lbm {

namespace {

struct LayerView {
    const float* w;  // [out x in], row-major
    const float* b;  // [out]
    int in;
    int out;
};

std::vector<LayerView> layer_views(const DriftModel& m) {
    std::vector<LayerView> views;
    const float* p = m.params.data();
    for (std::size_t l = 0; l + 1 < m.widths.size(); ++l) {
        const int in = m.widths[l], out = m.widths[l + 1];
        views.push_back({p, p + static_cast<std::ptrdiff_t>(in) * out, in, out});
        p += static_cast<std::ptrdiff_t>(in) * out + out;
    }
    return views;
}

void check_model_inputs(const DriftModel& m, const TensorBatch& zt,
                        std::span<const float> t, const TensorBatch* cond) {
    if (zt.feature_size() != m.latent_dim())
        throw std::invalid_argument("model: flattened input size " +
                                    std::to_string(zt.feature_size()) +
                                    " != latent dim " + std::to_string(m.latent_dim()));
    if (static_cast<std::int64_t>(t.size()) != zt.n())
        throw std::invalid_argument("model: need one t per sample");
    if (m.cond_dim > 0) {
        if (cond == nullptr)
            throw std::invalid_argument("model: condition required but missing");
        if (cond->n() != zt.n() || cond->feature_size() != m.cond_dim)
            throw std::invalid_argument("model: condition dims mismatch");
    } else if (cond != nullptr) {
        throw std::invalid_argument("model: condition supplied to an unconditional model");
    }
}

void assemble_input(const DriftModel& m, const TensorBatch& zt,
                    std::span<const float> t, const TensorBatch* cond,
                    std::int64_t i, float* x) {
    const std::int64_t d = m.latent_dim();
    const float* pz = zt.row(i);
    for (std::int64_t j = 0; j < d; ++j) x[j] = pz[j];
    x[d] = t[static_cast<std::size_t>(i)];
    if (m.cond_dim > 0) {
        const float* pc = cond->row(i);
        for (int j = 0; j < m.cond_dim; ++j) x[d + 1 + j] = pc[j];
    }
}

}  // namespace

std::int64_t DriftModel::param_count(const std::vector<int>& widths) {
    std::int64_t count = 0;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l)
        count += static_cast<std::int64_t>(widths[l]) * widths[l + 1] + widths[l + 1];
    return count;
}

DriftModel init_params(const std::vector<int>& widths, int cond_dim, RngStream& stream) {
    if (widths.size() < 2) throw std::invalid_argument("model needs at least 2 layer widths");
    for (int w : widths)
        if (w < 1) throw std::invalid_argument("layer widths must be >= 1");
    if (cond_dim < 0) throw std::invalid_argument("cond_dim must be >= 0");
    if (widths.front() != widths.back() + 1 + cond_dim)
        throw std::invalid_argument("input width must equal latent + 1 + cond dims: " +
                                    std::to_string(widths.front()) + " vs " +
                                    std::to_string(widths.back() + 1 + cond_dim));

    DriftModel m;
    m.widths = widths;
    m.cond_dim = cond_dim;
    m.params.assign(static_cast<std::size_t>(DriftModel::param_count(widths)), 0.0f);

    float* p = m.params.data();
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        const int in = widths[l], out = widths[l + 1];
        const float scale = 1.0f / std::sqrt(static_cast<float>(in));
        for (std::int64_t k = 0; k < static_cast<std::int64_t>(in) * out; ++k)
            p[k] = scale * stream.next_normal();
        // biases stay zero
        p += static_cast<std::ptrdiff_t>(in) * out + out;
    }
    return m;
}

TensorBatch forward(const DriftModel& m, const TensorBatch& zt,
                    std::span<const float> t, const TensorBatch* cond) {
    check_model_inputs(m, zt, t, cond);
    m.forward_calls += 1;

    const auto layers = layer_views(m);
    const std::size_t depth = layers.size();
    std::size_t max_width = 0;
    for (int w : m.widths) max_width = std::max(max_width, static_cast<std::size_t>(w));

    TensorBatch out(zt.shape);
    std::vector<float> cur(max_width), next(max_width);
    for (std::int64_t i = 0; i < zt.n(); ++i) {
        assemble_input(m, zt, t, cond, i, cur.data());
        for (std::size_t l = 0; l < depth; ++l) {
            const LayerView& lv = layers[l];
            for (int o = 0; o < lv.out; ++o) {
                const float* wr = lv.w + static_cast<std::ptrdiff_t>(o) * lv.in;
                float acc = lv.b[o];
                for (int j = 0; j < lv.in; ++j) acc += wr[j] * cur[static_cast<std::size_t>(j)];
                next[static_cast<std::size_t>(o)] =
                    (l + 1 < depth) ? std::tanh(acc) : acc;
            }
            std::swap(cur, next);
        }
        float* po = out.row(i);
        for (int j = 0; j < m.latent_dim(); ++j) po[j] = cur[static_cast<std::size_t>(j)];
    }
    return out;
}

std::vector<float> backward(const DriftModel& m, const TensorBatch& zt,
                            std::span<const float> t, const TensorBatch* cond,
                            const TensorBatch& upstream) {
    check_model_inputs(m, zt, t, cond);
    if (!upstream.same_shape(zt))
        throw std::invalid_argument("backward: upstream gradient shape mismatch");

    const auto layers = layer_views(m);
    const std::size_t depth = layers.size();
    std::size_t max_width = 0;
    for (int w : m.widths) max_width = std::max(max_width, static_cast<std::size_t>(w));

    std::vector<double> grad_acc(m.params.size(), 0.0);
    // activations[l] holds the input of layer l (post-tanh for l > 0)
    std::vector<std::vector<float>> acts(depth + 1);
    for (std::size_t l = 0; l <= depth; ++l)
        acts[l].resize(static_cast<std::size_t>(m.widths[l]));
    std::vector<float> delta(max_width), delta_prev(max_width);

    for (std::int64_t i = 0; i < zt.n(); ++i) {
        assemble_input(m, zt, t, cond, i, acts[0].data());
        for (std::size_t l = 0; l < depth; ++l) {
            const LayerView& lv = layers[l];
            for (int o = 0; o < lv.out; ++o) {
                const float* wr = lv.w + static_cast<std::ptrdiff_t>(o) * lv.in;
                float acc = lv.b[o];
                for (int j = 0; j < lv.in; ++j) acc += wr[j] * acts[l][static_cast<std::size_t>(j)];
                acts[l + 1][static_cast<std::size_t>(o)] =
                    (l + 1 < depth) ? std::tanh(acc) : acc;
            }
        }

        const float* pu = upstream.row(i);
        for (int o = 0; o < m.latent_dim(); ++o) delta[static_cast<std::size_t>(o)] = pu[o];

        double* g = grad_acc.data() + grad_acc.size();
        for (std::size_t l = depth; l-- > 0;) {
            const LayerView& lv = layers[l];
            g -= static_cast<std::ptrdiff_t>(lv.in) * lv.out + lv.out;
            double* gw = g;
            double* gb = g + static_cast<std::ptrdiff_t>(lv.in) * lv.out;
            const std::vector<float>& a = acts[l];
            for (int o = 0; o < lv.out; ++o) {
                const float dl = delta[static_cast<std::size_t>(o)];
                double* gwr = gw + static_cast<std::ptrdiff_t>(o) * lv.in;
                for (int j = 0; j < lv.in; ++j)
                    gwr[j] += static_cast<double>(dl) * a[static_cast<std::size_t>(j)];
                gb[o] += dl;
            }
            if (l > 0) {
                for (int j = 0; j < lv.in; ++j) {
                    float acc = 0.0f;
                    for (int o = 0; o < lv.out; ++o)
                        acc += lv.w[static_cast<std::ptrdiff_t>(o) * lv.in + j] *
                               delta[static_cast<std::size_t>(o)];
                    const float aj = a[static_cast<std::size_t>(j)];
                    delta_prev[static_cast<std::size_t>(j)] = acc * (1.0f - aj * aj);
                }
                std::swap(delta, delta_prev);
            }
        }
    }

    std::vector<float> grad(m.params.size());
    for (std::size_t k = 0; k < grad.size(); ++k) grad[k] = static_cast<float>(grad_acc[k]);
    return grad;
}

void save_checkpoint(const std::filesystem::path& path, const DriftModel& m) {
    TensorBatch t({1, static_cast<std::int64_t>(m.params.size())}, m.params);
    write_tensor(path, t);
    std::ofstream meta(path.string() + ".meta");
    if (!meta) throw std::runtime_error("cannot write checkpoint sidecar for " + path.string());
    meta << "widths=";
    for (std::size_t i = 0; i < m.widths.size(); ++i) meta << (i ? "," : "") << m.widths[i];
    meta << "\ncond_dim=" << m.cond_dim << "\n";
}

DriftModel load_checkpoint(const std::filesystem::path& path) {
    TensorBatch t = read_tensor(path);
    std::ifstream meta(path.string() + ".meta");
    if (!meta) throw std::runtime_error("missing checkpoint sidecar " + path.string() + ".meta");

    DriftModel m;
    std::string line;
    while (std::getline(meta, line)) {
        if (line.rfind("widths=", 0) == 0) {
            std::stringstream ss(line.substr(7));
            std::string item;
            while (std::getline(ss, item, ',')) m.widths.push_back(std::stoi(item));
        } else if (line.rfind("cond_dim=", 0) == 0) {
            m.cond_dim = std::stoi(line.substr(9));
        }
    }
    if (m.widths.size() < 2)
        throw std::runtime_error("checkpoint sidecar lists no layer widths");
    if (DriftModel::param_count(m.widths) != t.size())
        throw std::runtime_error("checkpoint parameter count does not match widths");
    m.params = std::move(t.data);
    return m;
}

}  // namespace lbm
