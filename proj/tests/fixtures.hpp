#pragma once

#include <random>
#include <string>
#include <vector>

#include "etpin/config.hpp"
#include "etpin/sim_engine.hpp"

#ifndef ETPIN_PRESET_DIR
#define ETPIN_PRESET_DIR "presets"
#endif

namespace fx {

inline std::string preset(const std::string& name) { return std::string(ETPIN_PRESET_DIR) + "/" + name; }

inline etpin::SimConfig benchmark() { return etpin::load_config(preset("chua_benchmark.yaml")).config; }

/// T from the benchmark.
inline etpin::Matrix bench_generator() {
    return {{-10, 6.5, 0, 3.5}, {7, -10, 3, 0}, {0, 1, -10, 9}, {4, 6, 0, -10}};
}

inline etpin::SwitchingNetwork single_mode(std::vector<etpin::Edge> edges, std::size_t m,
                                           std::vector<std::size_t> pinned) {
    etpin::SwitchingNetwork net;
    net.modes.push_back(etpin::GraphMode::from_edges(edges, m, pinned));
    net.generator = etpin::Matrix(1, 1, 0.0);
    return net;
}

/// Small self-contained run description with linear or Chua nodes.
inline etpin::SimConfig small_config(etpin::SwitchingNetwork net, etpin::NodeDynamics dyn, etpin::Rule rule) {
    etpin::SimConfig cfg;
    const std::size_t m = net.node_count(), n = dyn.dimension;
    cfg.P = etpin::identity_family(net.mode_count(), m);
    cfg.network = std::move(net);
    cfg.quad.G = etpin::Matrix::identity(n);
    cfg.quad.Gamma = etpin::Matrix::identity(n);
    cfg.quad.alpha = 10.0;
    cfg.quad.beta = etpin::estimate_quad_beta(10.0, dyn.jacobian_regions).beta;
    cfg.dynamics = std::move(dyn);
    cfg.control.rule = rule;
    cfg.horizon = 1.0;
    cfg.initial.target.assign(n, 0.1);
    cfg.initial.states = etpin::random_initial_states(m, n, 99, 1.0);
    return cfg;
}

inline std::vector<double> uniform_vec(std::mt19937_64& rng, std::size_t n, double r) {
    std::uniform_real_distribution<double> u(-r, r);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

struct RandomInstance {
    etpin::SwitchingNetwork net;
    etpin::PFamily P;
    etpin::Matrix G, Gamma;
    etpin::CouplingGains gains;
};

/// Small random certificate problem with m*n <= 6. The gains are spread so
/// that both verdicts occur.
inline RandomInstance random_instance(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick_m(1, 3), pick_modes(1, 3);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    RandomInstance r;
    const std::size_t m = pick_m(rng);
    const std::size_t n = m == 3 ? 2 : std::uniform_int_distribution<int>(1, 3)(rng);
    const std::size_t modes = pick_modes(rng);
    for (std::size_t u = 0; u < modes; ++u) {
        std::vector<etpin::Edge> edges;
        for (std::size_t i = 1; i <= m; ++i)
            for (std::size_t j = i + 1; j <= m; ++j)
                if (u01(rng) < 0.6) edges.emplace_back(i, j);
        std::vector<std::size_t> pins;
        for (std::size_t i = 1; i <= m; ++i)
            if (u01(rng) < 0.5) pins.push_back(i);
        r.net.modes.push_back(etpin::GraphMode::from_edges(edges, m, pins));
    }
    r.net.generator = etpin::Matrix(modes, modes);
    for (std::size_t u = 0; u < modes; ++u)
        for (std::size_t v = 0; v < modes; ++v)
            if (u != v) {
                r.net.generator(u, v) = 3.0 * u01(rng);
                r.net.generator(u, u) -= r.net.generator(u, v);
            }
    for (std::size_t u = 0; u < modes; ++u) {
        std::vector<double> d(m);
        for (double& x : d) x = 0.5 + 1.5 * u01(rng);
        r.P.push_back(d);
    }
    // G = B B^T + 0.5 I, Gamma a perturbed identity.
    etpin::Matrix b(n, n);
    r.Gamma = etpin::Matrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            b(i, j) = u01(rng) - 0.5;
            r.Gamma(i, j) += 0.4 * (u01(rng) - 0.5);
        }
    r.G = b * etpin::transpose(b) + 0.5 * etpin::Matrix::identity(n);
    r.gains = {4.0 * u01(rng) - 2.0, 4.0 * u01(rng), 2.0 * u01(rng)};
    return r;
}

}  // namespace fx
