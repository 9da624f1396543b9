#include "lbm/schedule.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace lbm {

namespace {

constexpr double kMaxSupport = 0.99;

void validate_discrete(const std::vector<double>& support,
                       const std::vector<double>& weights) {
    if (support.empty()) throw std::invalid_argument("timestep support is empty");
    if (support.size() != weights.size())
        throw std::invalid_argument("timestep support/weights size mismatch");
    double prev = -1.0;
    for (double s : support) {
        if (!(s >= 0.0 && s <= kMaxSupport))
            throw std::invalid_argument("timestep support values must lie in [0, 0.99]");
        if (!(s > prev))
            throw std::invalid_argument("timestep support must be strictly increasing");
        prev = s;
    }
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("timestep weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("timestep weights must sum to 1");
}

double parse_number(std::string_view s, const char* what) {
    char* end = nullptr;
    std::string tmp(s);
    double v = std::strtod(tmp.c_str(), &end);
    if (end != tmp.c_str() + tmp.size() || tmp.empty())
        throw std::invalid_argument(std::string("cannot parse ") + what + ": '" + tmp + "'");
    return v;
}

}  // namespace

TimestepDistribution TimestepDistribution::uniform() {
    TimestepDistribution d;
    d.kind = TimestepKind::Uniform;
    return d;
}

TimestepDistribution TimestepDistribution::discrete_uniform(int k) {
    if (k < 1) throw std::invalid_argument("discrete timestep count must be >= 1");
    TimestepDistribution d;
    d.kind = TimestepKind::DiscreteUniform;
    d.support.resize(static_cast<std::size_t>(k));
    d.weights.assign(static_cast<std::size_t>(k), 1.0 / k);
    for (int i = 0; i < k; ++i) d.support[static_cast<std::size_t>(i)] = double(i) / k;
    validate_discrete(d.support, d.weights);
    return d;
}

TimestepDistribution TimestepDistribution::weighted(std::vector<double> support,
                                                    std::vector<double> weights) {
    validate_discrete(support, weights);
    TimestepDistribution d;
    d.kind = TimestepKind::WeightedDiscrete;
    d.support = std::move(support);
    d.weights = std::move(weights);
    return d;
}

TimestepDistribution TimestepDistribution::parse(std::string_view spec) {
    if (spec == "uniform") return uniform();
    if (spec.rfind("discrete:", 0) == 0) {
        const double k = parse_number(spec.substr(9), "discrete timestep count");
        if (k != std::floor(k)) throw std::invalid_argument("discrete count must be an integer");
        return discrete_uniform(static_cast<int>(k));
    }
    if (spec.rfind("weighted:", 0) == 0) {
        std::vector<double> support;
        std::vector<double> weights;
        std::string_view rest = spec.substr(9);
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            std::string_view item = rest.substr(0, comma);
            const auto at = item.find('@');
            if (at == std::string_view::npos)
                throw std::invalid_argument("weighted timestep entries must be t@weight");
            support.push_back(parse_number(item.substr(0, at), "timestep value"));
            weights.push_back(parse_number(item.substr(at + 1), "timestep weight"));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        return weighted(std::move(support), std::move(weights));
    }
    throw std::invalid_argument("unknown timestep distribution: '" + std::string(spec) + "'");
}

std::string TimestepDistribution::to_string() const {
    switch (kind) {
        case TimestepKind::Uniform:
            return "uniform";
        case TimestepKind::DiscreteUniform:
            return "discrete:" + std::to_string(support.size());
        case TimestepKind::WeightedDiscrete: {
            std::string out = "weighted:";
            char buf[64];
            for (std::size_t i = 0; i < support.size(); ++i) {
                std::snprintf(buf, sizeof(buf), "%s%.12g@%.12g", i ? "," : "", support[i],
                              weights[i]);
                out += buf;
            }
            return out;
        }
    }
    return "uniform";
}

bool TimestepDistribution::contains(float t) const {
    for (double s : support)
        if (static_cast<float>(s) == t) return true;
    return false;
}

std::vector<float> sample_t(const TimestepDistribution& dist, std::int64_t n,
                            RngStream& stream) {
    if (n < 1) throw std::invalid_argument("sample_t: n must be >= 1");
    std::vector<float> out(static_cast<std::size_t>(n));
    if (dist.kind == TimestepKind::Uniform) {
        for (auto& t : out) t = static_cast<float>(kMaxSupport * stream.next_uniform());
        return out;
    }
    if (dist.support.empty()) throw std::invalid_argument("sample_t: empty support");
    for (auto& t : out) {
        const double u = stream.next_uniform();
        double cum = 0.0;
        std::size_t pick = dist.support.size() - 1;
        for (std::size_t i = 0; i < dist.weights.size(); ++i) {
            cum += dist.weights[i];
            if (u < cum) {
                pick = i;
                break;
            }
        }
        t = static_cast<float>(dist.support[pick]);
    }
    return out;
}

SolverGrid inference_grid(const TimestepDistribution& dist, int steps) {
    if (steps < 1) throw std::invalid_argument("inference_grid: steps must be >= 1");
    if (dist.is_discrete() && steps > static_cast<int>(dist.support.size()))
        throw std::invalid_argument(
            "schedule error: " + std::to_string(steps) + " steps exceed the " +
            std::to_string(dist.support.size()) + "-point training support");

    SolverGrid g;
    g.t.resize(static_cast<std::size_t>(steps));
    g.dt.resize(static_cast<std::size_t>(steps));
    for (int j = 0; j < steps; ++j)
        g.t[static_cast<std::size_t>(j)] = static_cast<float>(j) / static_cast<float>(steps);
    for (int j = 0; j + 1 < steps; ++j)
        g.dt[static_cast<std::size_t>(j)] =
            g.t[static_cast<std::size_t>(j + 1)] - g.t[static_cast<std::size_t>(j)];
    g.dt[static_cast<std::size_t>(steps - 1)] = 1.0f - g.t[static_cast<std::size_t>(steps - 1)];
    return g;
}

}  // namespace lbm
