#pragma once

// Run descriptions in YAML. The grammar is documented in docs/config.md.
// Every problem found while reading is collected, so one load reports all
// of them at once.

#include <yaml-cpp/yaml.h>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "etpin/markov_chain.hpp"
#include "etpin/sim_engine.hpp"

namespace etpin {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems)
        : std::runtime_error(join(problems)), problems_(std::move(problems)) {}
    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    static std::string join(const std::vector<std::string>& p) {
        std::string s = "invalid configuration:";
        for (const auto& x : p) s += "\n  " + x;
        return s;
    }
    std::vector<std::string> problems_;
};

struct LoadedConfig {
    SimConfig config;
    std::vector<std::string> warnings;
};

namespace detail {

// absent keys come back as a plain undefined node instead of yaml-cpp's zombie,
// which throws on IsMap() and friends
inline YAML::Node at(const YAML::Node& parent, const char* key) {
    if (!parent.IsMap()) return YAML::Node(YAML::NodeType::Undefined);
    const YAML::Node child = parent[key];
    return child.IsDefined() ? child : YAML::Node(YAML::NodeType::Undefined);
}

class YamlReader {
public:
    std::vector<std::string> problems;

    void fail(const YAML::Node& node, const std::string& where, const std::string& what) {
        std::string loc;
        if (node.IsDefined() && node.Mark().line >= 0) loc = " (line " + std::to_string(node.Mark().line + 1) + ")";
        problems.push_back(where + ": " + what + loc);
    }

    void check_keys(const YAML::Node& map, const std::string& where, std::initializer_list<const char*> known) {
        if (!map.IsMap()) return;
        for (const auto& kv : map) {
            const auto key = kv.first.as<std::string>();
            bool ok = false;
            for (const char* k : known) ok = ok || key == k;
            if (!ok) fail(kv.first, where, "unknown key '" + key + "'");
        }
    }

    std::optional<double> number(const YAML::Node& node, const std::string& where) {
        if (!node.IsDefined()) return std::nullopt;
        try {
            return node.as<double>();
        } catch (const YAML::Exception&) {
            fail(node, where, "expected a number");
            return std::nullopt;
        }
    }

    double number_or(const YAML::Node& node, const std::string& where, double fallback) {
        return number(node, where).value_or(fallback);
    }

    std::optional<std::uint64_t> integer(const YAML::Node& node, const std::string& where) {
        if (!node.IsDefined()) return std::nullopt;
        try {
            return node.as<std::uint64_t>();
        } catch (const YAML::Exception&) {
            fail(node, where, "expected a nonnegative integer");
            return std::nullopt;
        }
    }

    std::vector<double> vector(const YAML::Node& node, const std::string& where) {
        std::vector<double> out;
        if (!node.IsSequence()) {
            fail(node, where, "expected a list of numbers");
            return out;
        }
        for (std::size_t k = 0; k < node.size(); ++k) {
            auto v = number(node[k], where + "[" + std::to_string(k) + "]");
            out.push_back(v.value_or(0.0));
        }
        return out;
    }

    std::optional<Matrix> matrix(const YAML::Node& node, const std::string& where, std::size_t n) {
        if (!node.IsDefined()) return Matrix::identity(n);
        if (node.IsScalar() && node.as<std::string>() == "identity") return Matrix::identity(n);
        if (!node.IsSequence()) {
            fail(node, where, "expected 'identity' or a list of rows");
            return std::nullopt;
        }
        Matrix out(node.size(), node.size());
        for (std::size_t r = 0; r < node.size(); ++r) {
            auto row = vector(node[r], where + "[" + std::to_string(r) + "]");
            if (row.size() != node.size()) {
                fail(node[r], where, "matrix must be square");
                return std::nullopt;
            }
            for (std::size_t c = 0; c < row.size(); ++c) out(r, c) = row[c];
        }
        return out;
    }
};

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/// Uniform [-range, range] initial states, one block per node.
inline std::vector<double> random_initial_states(std::size_t m, std::size_t n, std::uint64_t seed, double range) {
    Rng rng(seed);
    std::uniform_real_distribution<double> u(-range, range);
    std::vector<double> out(m * n);
    for (double& x : out) x = u(rng);
    return out;
}

inline LoadedConfig parse_config(const std::string& text) {
    using detail::at;
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError({"parse error at line " + std::to_string(e.mark.line + 1) + ", column " +
                           std::to_string(e.mark.column + 1) + ": " + e.msg});
    }
    if (!root.IsMap()) throw ConfigError({"top level must be a mapping"});

    detail::YamlReader rd;
    LoadedConfig out;
    SimConfig& cfg = out.config;
    rd.check_keys(root, "config", {"network", "dynamics", "quad", "certificate", "control", "simulation", "initial"});

    // network
    const auto net = at(root, "network");
    std::size_t m = 0;
    if (!net.IsMap()) {
        rd.fail(root, "network", "missing section");
    } else {
        rd.check_keys(net, "network", {"nodes", "modes", "generator", "initial_mode"});
        m = rd.integer(at(net, "nodes"), "network.nodes").value_or(0);
        if (m == 0) rd.fail(net, "network.nodes", "must be a positive integer");
        const auto modes = at(net, "modes");
        if (!modes.IsSequence() || modes.size() == 0) {
            rd.fail(net, "network.modes", "expected a nonempty list of modes");
        } else {
            for (std::size_t u = 0; u < modes.size(); ++u) {
                const std::string where = "network.modes[" + std::to_string(u + 1) + "]";
                const auto mode = modes[u];
                rd.check_keys(mode, where, {"edges", "pinned"});
                std::vector<Edge> edges;
                if (!at(mode, "edges").IsSequence()) {
                    rd.fail(mode, where + ".edges", "expected a list of [i, j] pairs");
                } else {
                    for (const auto& e : at(mode, "edges")) {
                        auto pair = rd.vector(e, where + ".edges");
                        if (pair.size() != 2) {
                            rd.fail(e, where + ".edges", "each edge must be a pair [i, j]");
                            continue;
                        }
                        edges.emplace_back(static_cast<std::size_t>(pair[0]), static_cast<std::size_t>(pair[1]));
                    }
                }
                std::vector<std::size_t> pinned;
                if (!at(mode, "pinned").IsDefined()) {
                    rd.fail(mode, where + ".pinned", "missing pinned set (use [] for none)");
                } else if (!at(mode, "pinned").IsSequence()) {
                    rd.fail(at(mode, "pinned"), where + ".pinned", "expected a list of node indices");
                } else {
                    for (double p : rd.vector(at(mode, "pinned"), where + ".pinned"))
                        pinned.push_back(static_cast<std::size_t>(p));
                }
                try {
                    if (m > 0) cfg.network.modes.push_back(GraphMode::from_edges(edges, m, pinned));
                } catch (const std::invalid_argument& e) {
                    rd.fail(mode, where, e.what());
                }
            }
        }
        const auto gen = at(net, "generator");
        if (!gen.IsDefined()) {
            rd.fail(net, "network.generator", "missing generator matrix");
        } else if (auto q = rd.matrix(gen, "network.generator", 0)) {
            cfg.network.generator = *q;
        }
        if (auto u0 = rd.integer(at(net, "initial_mode"), "network.initial_mode")) {
            if (*u0 == 0)
                rd.fail(at(net, "initial_mode"), "network.initial_mode", "modes are numbered from 1");
            else
                cfg.initial_mode = *u0 - 1;
        }
    }

    // dynamics
    const auto dyn = at(root, "dynamics");
    bool have_dynamics = false;
    if (!dyn.IsMap()) {
        rd.fail(root, "dynamics", "missing section");
    } else {
        rd.check_keys(dyn, "dynamics", {"name", "params", "lipschitz", "one_sided"});
        DynamicsParams params;
        if (at(dyn, "params").IsMap())
            for (const auto& kv : at(dyn, "params"))
                params[kv.first.as<std::string>()] = rd.number_or(kv.second, "dynamics.params", 0.0);
        try {
            cfg.dynamics = make_dynamics(at(dyn, "name").IsDefined() ? at(dyn, "name").as<std::string>() : "", params);
            have_dynamics = true;
        } catch (const std::exception& e) {
            rd.fail(dyn, "dynamics", e.what());
        }
        if (auto lf = rd.number(at(dyn, "lipschitz"), "dynamics.lipschitz")) cfg.dynamics.lipschitz = *lf;
        if (auto os = rd.number(at(dyn, "one_sided"), "dynamics.one_sided")) cfg.dynamics.one_sided = *os;
    }
    const std::size_t n = cfg.dynamics.dimension;

    // quad
    const auto quad = at(root, "quad");
    rd.check_keys(quad, "quad", {"alpha", "beta", "G", "Gamma"});
    cfg.quad.alpha = rd.number_or(at(quad, "alpha"), "quad.alpha", 10.0);
    cfg.quad.G = rd.matrix(at(quad, "G"), "quad.G", n).value_or(Matrix::identity(n));
    cfg.quad.Gamma = rd.matrix(at(quad, "Gamma"), "quad.Gamma", n).value_or(Matrix::identity(n));
    const auto beta = at(quad, "beta");
    if (!beta.IsDefined() || (beta.IsScalar() && beta.as<std::string>() == "auto")) {
        if (have_dynamics) {
            if (!is_identity(cfg.quad.G) || !is_identity(cfg.quad.Gamma)) {
                rd.fail(quad, "quad.beta", "'auto' requires G = Gamma = identity; give beta explicitly");
            } else {
                const auto est = estimate_quad_beta(cfg.quad.alpha, cfg.dynamics.jacobian_regions);
                cfg.quad.beta = est.beta;
                if (est.warning) out.warnings.push_back(*est.warning);
            }
        }
    } else {
        cfg.quad.beta = rd.number_or(beta, "quad.beta", 0.0);
    }

    // certificate
    const auto cert = at(root, "certificate");
    rd.check_keys(cert, "certificate", {"P", "tolerance"});
    cfg.certificate_tolerance = rd.number_or(at(cert, "tolerance"), "certificate.tolerance", 1e-9);
    const auto pnode = at(cert, "P");
    if (!pnode.IsDefined() || (pnode.IsScalar() && pnode.as<std::string>() == "identity")) {
        cfg.P = identity_family(cfg.network.modes.size(), m);
    } else if (pnode.IsSequence()) {
        for (std::size_t u = 0; u < pnode.size(); ++u)
            cfg.P.push_back(rd.vector(pnode[u], "certificate.P[" + std::to_string(u + 1) + "]"));
    } else {
        rd.fail(pnode, "certificate.P", "expected 'identity' or one diagonal per mode");
    }

    // control
    const auto ctl = at(root, "control");
    rd.check_keys(ctl, "control", {"rule", "c", "epsilon", "delta", "a", "b", "generator", "inflation", "mu", "xi_max"});
    auto& k = cfg.control;
    if (at(ctl, "rule").IsDefined()) {
        const auto name = at(ctl, "rule").as<std::string>();
        if (auto r = parse_rule(name))
            k.rule = *r;
        else
            rd.fail(at(ctl, "rule"), "control.rule", "unknown rule '" + name + "'");
    }
    k.c = rd.number_or(at(ctl, "c"), "control.c", k.c);
    k.epsilon = rd.number_or(at(ctl, "epsilon"), "control.epsilon", k.epsilon);
    k.delta = rd.number_or(at(ctl, "delta"), "control.delta", k.delta);
    k.a = rd.number_or(at(ctl, "a"), "control.a", k.a);
    k.b = rd.number_or(at(ctl, "b"), "control.b", k.b);
    k.inflation = rd.number_or(at(ctl, "inflation"), "control.inflation", k.inflation);
    k.xi_max = rd.number_or(at(ctl, "xi_max"), "control.xi_max", k.xi_max);
    if (at(ctl, "mu").IsDefined() && !(at(ctl, "mu").IsScalar() && at(ctl, "mu").as<std::string>() == "auto"))
        k.mu = rd.number(at(ctl, "mu"), "control.mu");
    if (at(ctl, "generator").IsDefined()) {
        const auto g = at(ctl, "generator").as<std::string>();
        if (g == "closed-form")
            k.generator = GeneratorKind::ClosedForm;
        else if (g == "integrator")
            k.generator = GeneratorKind::Integrator;
        else
            rd.fail(at(ctl, "generator"), "control.generator", "expected 'closed-form' or 'integrator'");
    }

    // simulation
    const auto sim = at(root, "simulation");
    rd.check_keys(sim, "simulation", {"dt", "horizon", "record_stride", "trials", "seed"});
    cfg.dt = rd.number_or(at(sim, "dt"), "simulation.dt", cfg.dt);
    cfg.horizon = rd.number_or(at(sim, "horizon"), "simulation.horizon", cfg.horizon);
    cfg.record_stride = rd.integer(at(sim, "record_stride"), "simulation.record_stride").value_or(cfg.record_stride);
    cfg.trials = rd.integer(at(sim, "trials"), "simulation.trials").value_or(cfg.trials);
    cfg.seed = rd.integer(at(sim, "seed"), "simulation.seed").value_or(cfg.seed);

    // initial conditions
    const auto init = at(root, "initial");
    rd.check_keys(init, "initial", {"target", "states", "seed", "range"});
    if (at(init, "target").IsDefined())
        cfg.initial.target = rd.vector(at(init, "target"), "initial.target");
    else
        cfg.initial.target.assign(n, 0.1);
    const auto states = at(init, "states");
    if (!states.IsDefined() || (states.IsScalar() && states.as<std::string>() == "random")) {
        const auto seed = rd.integer(at(init, "seed"), "initial.seed").value_or(2024);
        const double range = rd.number_or(at(init, "range"), "initial.range", 1.0);
        cfg.initial.states = random_initial_states(m, n, seed, range);
    } else if (states.IsSequence()) {
        for (std::size_t i = 0; i < states.size(); ++i) {
            auto row = rd.vector(states[i], "initial.states[" + std::to_string(i + 1) + "]");
            cfg.initial.states.insert(cfg.initial.states.end(), row.begin(), row.end());
        }
    } else {
        rd.fail(states, "initial.states", "expected 'random' or one state per node");
    }

    if (rd.problems.empty()) {
        for (auto& p : validate_sim_config(cfg)) rd.problems.push_back(std::move(p));
    }
    if (!rd.problems.empty()) throw ConfigError(std::move(rd.problems));
    return out;
}

inline LoadedConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot open config file '" + path.string() + "'"});
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

/// Fully resolved configuration as YAML with fixed key order and
/// round-trip number formatting. Reloading it reproduces the same run.
inline std::string canonicalize(const SimConfig& cfg) {
    using detail::num;
    std::ostringstream os;
    auto list = [&](std::span<const double> v) {
        os << "[";
        for (std::size_t k = 0; k < v.size(); ++k) os << (k ? ", " : "") << num(v[k]);
        os << "]";
    };
    auto matrix = [&](const Matrix& a, const char* indent) {
        for (std::size_t r = 0; r < a.rows(); ++r) {
            os << indent << "- ";
            list(a.row(r));
            os << "\n";
        }
    };
    const std::size_t m = cfg.m(), n = cfg.n();
    os << "network:\n  nodes: " << m << "\n";
    if (cfg.initial_mode) os << "  initial_mode: " << (*cfg.initial_mode + 1) << "\n";
    os << "  modes:\n";
    for (const auto& mode : cfg.network.modes) {
        os << "    - edges: [";
        bool first = true;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j)
                if (mode.laplacian(i, j) == -1.0) {
                    os << (first ? "" : ", ") << "[" << i + 1 << ", " << j + 1 << "]";
                    first = false;
                }
        os << "]\n      pinned: [";
        for (std::size_t k = 0; k < mode.pinned.size(); ++k) os << (k ? ", " : "") << mode.pinned[k] + 1;
        os << "]\n";
    }
    os << "  generator:\n";
    matrix(cfg.network.generator, "    ");
    os << "dynamics:\n  name: " << cfg.dynamics.name << "\n  params:\n";
    for (const auto& [key, v] : cfg.dynamics.parameters) os << "    " << key << ": " << num(v) << "\n";
    os << "  lipschitz: " << num(cfg.dynamics.lipschitz) << "\n  one_sided: " << num(cfg.dynamics.one_sided) << "\n";
    os << "quad:\n  alpha: " << num(cfg.quad.alpha) << "\n  beta: " << num(cfg.quad.beta) << "\n  G:\n";
    matrix(cfg.quad.G, "    ");
    os << "  Gamma:\n";
    matrix(cfg.quad.Gamma, "    ");
    os << "certificate:\n  tolerance: " << num(cfg.certificate_tolerance) << "\n  P:\n";
    for (const auto& d : cfg.P) {
        os << "    - ";
        list(d);
        os << "\n";
    }
    const auto& k = cfg.control;
    os << "control:\n  rule: " << rule_name(k.rule) << "\n  c: " << num(k.c) << "\n  epsilon: " << num(k.epsilon)
       << "\n  delta: " << num(k.delta) << "\n  a: " << num(k.a) << "\n  b: " << num(k.b) << "\n  generator: "
       << (k.generator == GeneratorKind::ClosedForm ? "closed-form" : "integrator")
       << "\n  inflation: " << num(k.inflation) << "\n  mu: " << (k.mu ? num(*k.mu) : std::string("auto"))
       << "\n  xi_max: " << num(k.xi_max) << "\n";
    os << "simulation:\n  dt: " << num(cfg.dt) << "\n  horizon: " << num(cfg.horizon)
       << "\n  record_stride: " << cfg.record_stride << "\n  trials: " << cfg.trials << "\n  seed: " << cfg.seed
       << "\n";
    os << "initial:\n  target: ";
    list(cfg.initial.target);
    os << "\n  states:\n";
    for (std::size_t i = 0; i < m; ++i) {
        os << "    - ";
        list(std::span<const double>(cfg.initial.states).subspan(i * n, n));
        os << "\n";
    }
    return os.str();
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string config_digest(const SimConfig& cfg) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonicalize(cfg))));
    return buf;
}

}  // namespace etpin
