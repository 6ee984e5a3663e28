#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "etpin/net_topology.hpp"

namespace etpin {

using Rng = std::mt19937_64;

struct ModeSegment {
    std::size_t mode;  // 0-based
    double start;
    double end;
};

/// Piecewise-constant realization of the switching signal on [0, horizon].
struct ModePath {
    std::vector<ModeSegment> segments;
    double horizon = 0.0;
    bool absorbed = false;  // the last segment ended in a mode with zero exit rate

    std::size_t mode_at(double t) const {
        for (const auto& s : segments)
            if (t < s.end) return s.mode;
        return segments.back().mode;
    }

    /// Switch instants strictly inside (0, horizon).
    std::vector<double> switch_times() const {
        std::vector<double> out;
        for (std::size_t k = 1; k < segments.size(); ++k) out.push_back(segments[k].start);
        return out;
    }
};

/// Exit rate -q_uu of mode u.
inline double sojourn_rate(const SwitchingNetwork& net, std::size_t u) {
    if (u >= net.mode_count()) throw std::out_of_range("sojourn_rate: mode index out of range");
    return -net.generator(u, u);
}

/// Draws the next mode from the embedded jump chain, P(v) = -q_uv / q_uu.
template <class Gen>
std::size_t sample_transition(const SwitchingNetwork& net, std::size_t u, Gen& rng) {
    const double rate = sojourn_rate(net, u);
    if (!(rate > 0.0)) throw std::domain_error("no transition from absorbing mode");
    std::uniform_real_distribution<double> pick(0.0, rate);
    const double r = pick(rng);
    double acc = 0.0;
    std::size_t last = u;
    for (std::size_t v = 0; v < net.mode_count(); ++v) {
        if (v == u || net.generator(u, v) <= 0.0) continue;
        acc += net.generator(u, v);
        last = v;
        if (r < acc) return v;
    }
    // Rounding can leave r just above the accumulated total.
    return last;
}

template <class Gen>
ModePath generate_path(const SwitchingNetwork& net, std::size_t u0, double horizon, Gen& rng) {
    if (!(horizon > 0.0)) throw std::invalid_argument("generate_path: horizon must be positive");
    if (u0 >= net.mode_count()) throw std::out_of_range("generate_path: initial mode out of range");
    ModePath path;
    path.horizon = horizon;
    std::size_t u = u0;
    double start = 0.0;
    while (true) {
        const double rate = sojourn_rate(net, u);
        if (!(rate > 0.0)) {
            path.segments.push_back({u, start, horizon});
            path.absorbed = true;
            break;
        }
        std::exponential_distribution<double> sojourn(rate);
        const double end = start + sojourn(rng);
        if (end >= horizon) {
            path.segments.push_back({u, start, horizon});
            break;
        }
        path.segments.push_back({u, start, end});
        start = end;
        u = sample_transition(net, u, rng);
    }
    return path;
}

inline ModePath generate_path(const SwitchingNetwork& net, std::size_t u0, double horizon, std::uint64_t seed) {
    Rng rng(seed);
    return generate_path(net, u0, horizon, rng);
}

template <class Gen>
std::size_t draw_initial_mode(const SwitchingNetwork& net, Gen& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, net.mode_count() - 1);
    return pick(rng);
}

}  // namespace etpin
