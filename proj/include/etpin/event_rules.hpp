#pragma once

// Event-triggering rules.
//
// Continuous monitoring checks |z_i| against a threshold every step:
//   cont-state : |z_i| <= coeff * |x_i - s|
//   cont-exp   : |z_i| <= a exp(-b t)
// Discrete monitoring predicts a deadline xi at each anchor from the
// rho/varrho bounds and the data held at the anchor:
//   disc-state : sum_j w_j rho_j(xi) <= coeff * varrho(xi)
//   disc-exp   : sum_j w_j rho_j(xi) <= a exp(-b (xi + t_anchor))
//
// State blocks are flattened node-major: node i occupies [i*n, (i+1)*n).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "etpin/linalg.hpp"
#include "etpin/net_topology.hpp"
#include "etpin/node_dynamics.hpp"
#include "etpin/trajectory_bounds.hpp"

namespace etpin {

enum class Rule { ContState, ContExp, DiscState, DiscExp };

inline constexpr Rule all_rules[] = {Rule::ContState, Rule::ContExp, Rule::DiscState, Rule::DiscExp};

inline std::string_view rule_name(Rule r) {
    switch (r) {
        case Rule::ContState: return "cont-state";
        case Rule::ContExp: return "cont-exp";
        case Rule::DiscState: return "disc-state";
        case Rule::DiscExp: return "disc-exp";
    }
    return "?";
}

inline std::optional<Rule> parse_rule(std::string_view s) {
    for (Rule r : all_rules)
        if (rule_name(r) == s) return r;
    return std::nullopt;
}

inline bool is_discrete(Rule r) { return r == Rule::DiscState || r == Rule::DiscExp; }
inline bool uses_state_threshold(Rule r) { return r == Rule::ContState || r == Rule::DiscState; }

enum class TriggerCause { Initialization, RuleViolation, NeighborBroadcast, ModeSwitch };

inline std::string_view cause_name(TriggerCause c) {
    switch (c) {
        case TriggerCause::Initialization: return "initialization";
        case TriggerCause::RuleViolation: return "rule-violation";
        case TriggerCause::NeighborBroadcast: return "neighbor-broadcast";
        case TriggerCause::ModeSwitch: return "mode-switch";
    }
    return "?";
}

struct TriggerEvent {
    std::size_t node;
    double time;
    TriggerCause cause;

    bool operator==(const TriggerEvent&) const = default;
};

struct CouplingParams {
    double c = 0.0;
    double epsilon = 0.0;
    Matrix gamma;
};

inline std::span<const double> node_block(std::span<const double> block, std::size_t i, std::size_t n) {
    return block.subspan(i * n, n);
}

/// theta_i = -c sum_j L_ij Gamma (x_j - x_i) - c eps D_i (x_i - s), all on held data.
inline std::vector<double> compute_theta(std::size_t i, const GraphMode& mode, std::span<const double> held_states,
                                         std::span<const double> held_target, const CouplingParams& k) {
    const std::size_t n = held_target.size();
    const std::size_t m = mode.node_count();
    if (held_states.size() != m * n || k.gamma.rows() != n || k.gamma.cols() != n)
        throw std::invalid_argument("compute_theta: held snapshot incomplete or dimension mismatch");
    const auto xi = node_block(held_states, i, n);
    std::vector<double> diffusion(n, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        const double lij = mode.laplacian(i, j);
        if (j == i || lij == 0.0) continue;
        const auto xj = node_block(held_states, j, n);
        for (std::size_t d = 0; d < n; ++d) diffusion[d] += lij * (xj[d] - xi[d]);
    }
    const auto coupled = matvec(k.gamma, diffusion);
    const double pin = mode.pin_indicator(i);
    std::vector<double> theta(n);
    for (std::size_t d = 0; d < n; ++d)
        theta[d] = -k.c * coupled[d] - k.c * k.epsilon * pin * (xi[d] - held_target[d]);
    return theta;
}

/// z_i = sum_j L_ij Gamma [(x_j - x_i)(t) - (x_j - x_i)(t_k)] + eps D_i [(x_i - s)(t) - (x_i - s)(t_k)]
inline std::vector<double> compute_zi(std::size_t i, std::span<const double> states, std::span<const double> target,
                                      std::span<const double> held_states, std::span<const double> held_target,
                                      const GraphMode& mode, double epsilon, const Matrix& gamma) {
    const std::size_t n = target.size();
    const std::size_t m = mode.node_count();
    if (states.size() != m * n || held_states.size() != m * n || held_target.size() != n)
        throw std::invalid_argument("compute_zi: dimension mismatch");
    const auto xi = node_block(states, i, n);
    const auto hi = node_block(held_states, i, n);
    std::vector<double> drift(n, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        const double lij = mode.laplacian(i, j);
        if (j == i || lij == 0.0) continue;
        const auto xj = node_block(states, j, n);
        const auto hj = node_block(held_states, j, n);
        for (std::size_t d = 0; d < n; ++d) drift[d] += lij * ((xj[d] - xi[d]) - (hj[d] - hi[d]));
    }
    auto z = matvec(gamma, drift);
    if (mode.pin_indicator(i) != 0.0)
        for (std::size_t d = 0; d < n; ++d)
            z[d] += epsilon * ((xi[d] - target[d]) - (hi[d] - held_target[d]));
    return z;
}

// Trigger comparisons are strict: equality keeps the held control.
inline bool rule1_check(double zi_norm, double xhat_norm, double coeff) { return zi_norm > coeff * xhat_norm; }
inline bool rule2_check(double zi_norm, double t, double a, double b) { return zi_norm > a * std::exp(-b * t); }

/// One summand of the discrete-monitoring left-hand side: weight * rho(xi, theta_i, other_control, x_i, other_state).
struct DeadlineTerm {
    double weight = 0.0;
    double input_gap = 0.0;
    double state_gap = 0.0;
    std::vector<double> other_control;
    std::vector<double> other_state;
};

struct DeadlineProblem {
    std::vector<DeadlineTerm> terms;  // canonical order, see build_deadline_problem
    double target_input_gap = 0.0;    // |theta_i|
    double target_state_gap = 0.0;    // |x_i - s|
    std::vector<double> own_control;
    std::vector<double> own_state;
    std::vector<double> target_state;
};

/// Builds node i's rule context from the data it holds at the anchor: anchor
/// states of i, its neighbors and the target, and everyone's current held controls.
/// Gamma enters the neighbor weights through its spectral norm.
inline DeadlineProblem build_deadline_problem(std::size_t i, const GraphMode& mode, std::span<const double> states,
                                              std::span<const double> target, std::span<const double> controls,
                                              double epsilon, double gamma_norm) {
    const std::size_t n = target.size();
    const std::size_t m = mode.node_count();
    if (states.size() != m * n || controls.size() != m * n)
        throw std::invalid_argument("build_deadline_problem: dimension mismatch");
    DeadlineProblem p;
    const auto xi = node_block(states, i, n);
    const auto ti = node_block(controls, i, n);
    p.own_state.assign(xi.begin(), xi.end());
    p.own_control.assign(ti.begin(), ti.end());
    p.target_state.assign(target.begin(), target.end());
    for (std::size_t j = 0; j < m; ++j) {
        const double lij = mode.laplacian(i, j);
        if (j == i || lij == 0.0) continue;
        const auto xj = node_block(states, j, n);
        const auto tj = node_block(controls, j, n);
        p.terms.push_back({-lij * gamma_norm, distance2(ti, tj), distance2(xi, xj), {tj.begin(), tj.end()},
                           {xj.begin(), xj.end()}});
    }
    const std::vector<double> zero(n, 0.0);
    p.target_input_gap = norm2(ti);
    p.target_state_gap = distance2(xi, target);
    if (mode.pin_indicator(i) != 0.0)
        p.terms.push_back({epsilon, p.target_input_gap, p.target_state_gap, zero, {target.begin(), target.end()}});
    std::sort(p.terms.begin(), p.terms.end(), [](const DeadlineTerm& a, const DeadlineTerm& b) {
        return std::tie(a.weight, a.input_gap, a.state_gap) < std::tie(b.weight, b.input_gap, b.state_gap);
    });
    return p;
}

struct SearchOptions {
    double grid = 1e-3;
    double xi_min = 1e-3;
    double xi_max = 1.0;
};

struct SearchResult {
    double xi = 0.0;
    bool clamped = false;  // the rule failed before xi_min; xi_min was returned
};

/// Largest xi on the forward march with margin(xi) <= 0 before the first
/// violation, refined by bisection to grid/100 and floored at xi_min.
template <class Margin>
SearchResult search_deadline(Margin&& margin, const SearchOptions& opt) {
    if (!(opt.grid > 0.0) || !(opt.xi_max >= opt.xi_min) || !(opt.xi_min > 0.0))
        throw std::invalid_argument("search_deadline: need grid > 0 and 0 < xi_min <= xi_max");
    double lo = 0.0;
    for (std::size_t k = 1;; ++k) {
        const double hi = std::min(static_cast<double>(k) * opt.grid, opt.xi_max);
        if (margin(hi) > 0.0) {
            double a = lo, b = hi;
            while (b - a > opt.grid / 100.0) {
                const double mid = 0.5 * (a + b);
                if (margin(mid) > 0.0)
                    b = mid;
                else
                    a = mid;
            }
            if (a < opt.xi_min) return {opt.xi_min, true};
            return {a, false};
        }
        if (hi >= opt.xi_max) return {opt.xi_max, false};
        lo = hi;
    }
}

inline double rho_sum(const DeadlineProblem& p, double xi, double lipschitz) {
    double lhs = 0.0;
    for (const auto& term : p.terms) lhs += term.weight * rho_lipschitz(xi, term.input_gap, term.state_gap, lipschitz);
    return lhs;
}

inline SearchResult rule3_next_interval(const DeadlineProblem& p, double coeff, const BoundConstants& bc,
                                        const SearchOptions& opt) {
    auto margin = [&](double xi) {
        return rho_sum(p, xi, bc.lipschitz) -
               coeff * varrho_one_sided(xi, p.target_input_gap, p.target_state_gap, bc.one_sided, bc.mu);
    };
    return search_deadline(margin, opt);
}

inline SearchResult rule4_next_interval(const DeadlineProblem& p, double a, double b, double anchor_time,
                                        const BoundConstants& bc, const SearchOptions& opt) {
    auto margin = [&](double xi) { return rho_sum(p, xi, bc.lipschitz) - a * std::exp(-b * (xi + anchor_time)); };
    return search_deadline(margin, opt);
}

enum class GeneratorKind { ClosedForm, Integrator };

struct DiscreteRuleParams {
    Rule rule = Rule::DiscState;
    double coeff = 0.0;
    double a = 0.0;
    double b = 0.0;
    BoundConstants bounds;
    SearchOptions search;
    GeneratorKind generator = GeneratorKind::ClosedForm;
    double inflation = 1.1;                // integrator generator: rho scaled up, varrho scaled down
    const NodeDynamics* dynamics = nullptr;  // required by the integrator generator
};

/// Integrator-backed generator: paired Euler trajectories stand in for the
/// closed forms, inflated by a safety factor. Margins exist only on the grid,
/// so the crossing is located by linear interpolation.
inline SearchResult integrator_next_interval(const DeadlineProblem& p, const DiscreteRuleParams& prm,
                                             double anchor_time) {
    if (prm.dynamics == nullptr) throw std::invalid_argument("integrator generator requires node dynamics");
    const auto& opt = prm.search;
    const std::vector<double> zero(p.own_state.size(), 0.0);
    std::vector<PairedIntegrator> pairs;
    pairs.reserve(p.terms.size());
    for (const auto& term : p.terms)
        pairs.emplace_back(*prm.dynamics, p.own_control, term.other_control, p.own_state, term.other_state);
    PairedIntegrator target_pair(*prm.dynamics, p.own_control, zero, p.own_state, p.target_state);

    auto margin_now = [&](double xi) {
        double lhs = 0.0;
        for (std::size_t k = 0; k < pairs.size(); ++k) lhs += p.terms[k].weight * prm.inflation * pairs[k].deviation();
        const double rhs = prm.rule == Rule::DiscState ? prm.coeff * target_pair.distance() / prm.inflation
                                                       : prm.a * std::exp(-prm.b * (xi + anchor_time));
        return lhs - rhs;
    };

    double prev_xi = 0.0;
    double prev_margin = margin_now(0.0);
    while (true) {
        const double xi = std::min(prev_xi + opt.grid, opt.xi_max);
        const double h = xi - prev_xi;
        for (auto& pr : pairs) pr.step(h);
        target_pair.step(h);
        const double cur = margin_now(xi);
        if (cur > 0.0) {
            double found = prev_xi;
            if (prev_margin <= 0.0 && cur > prev_margin) found = prev_xi + h * (-prev_margin) / (cur - prev_margin);
            if (found < opt.xi_min) return {opt.xi_min, true};
            return {found, false};
        }
        if (xi >= opt.xi_max) return {opt.xi_max, false};
        prev_xi = xi;
        prev_margin = cur;
    }
}

inline SearchResult next_interval(const DeadlineProblem& p, const DiscreteRuleParams& prm, double anchor_time) {
    if (prm.generator == GeneratorKind::Integrator) return integrator_next_interval(p, prm, anchor_time);
    if (prm.rule == Rule::DiscState) return rule3_next_interval(p, prm.coeff, prm.bounds, prm.search);
    if (prm.rule == Rule::DiscExp) return rule4_next_interval(p, prm.a, prm.b, anchor_time, prm.bounds, prm.search);
    throw std::invalid_argument("next_interval: not a discrete-monitoring rule");
}

/// (1/b) ln(1 + 1/(A + B)) with
///   A = (2 m L_f + 2 c m (m + eps) + L_f + c m) / (a b),  B = (2m + 1) / b.
inline double zeno_lower_bound(double m, double lipschitz, double c, double epsilon, double a, double b) {
    if (!(m > 0.0) || !(lipschitz > 0.0) || !(c > 0.0) || epsilon < 0.0 || !(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("zeno_lower_bound: arguments must be positive (eps nonnegative)");
    const double big_a = (2.0 * m * lipschitz + 2.0 * c * m * (m + epsilon) + lipschitz + c * m) / (a * b);
    const double big_b = (2.0 * m + 1.0) / b;
    return std::log1p(1.0 / (big_a + big_b)) / b;
}

/// What node i holds between its events.
struct NodeTriggerState {
    std::size_t node = 0;
    double last_event_time = 0.0;
    std::vector<double> held_states;  // x_j(t_k^i) for every node j
    std::vector<double> held_target;  // s(t_k^i)
    std::vector<double> held_control;  // theta_i
    // discrete monitoring
    double anchor_time = 0.0;
    double next_deadline = INFINITY;
};

/// Event at node i: snapshot current states, recompute the held control.
inline void apply_event(NodeTriggerState& st, const GraphMode& mode, std::span<const double> states,
                        std::span<const double> target, double t, const CouplingParams& k) {
    st.held_states.assign(states.begin(), states.end());
    st.held_target.assign(target.begin(), target.end());
    st.held_control = compute_theta(st.node, mode, st.held_states, st.held_target, k);
    st.last_event_time = t;
}

/// A switch refreshes every node against the new mode, in both monitoring schemes.
inline void on_mode_switch(NodeTriggerState& st, const GraphMode& new_mode, std::span<const double> states,
                           std::span<const double> target, double t, const CouplingParams& k) {
    apply_event(st, new_mode, states, target, t, k);
}

/// Fresh deadline after the node's own event (or a switch): t + xi.
inline SearchResult schedule_deadline(NodeTriggerState& st, const DeadlineProblem& p, const DiscreteRuleParams& prm,
                                      double t) {
    const auto r = next_interval(p, prm, t);
    st.anchor_time = t;
    st.next_deadline = t + r.xi;
    return r;
}

/// A neighbor broadcast its new control: re-anchor the rule at t with the
/// updated context. The refreshed deadline never moves past the pending one.
inline SearchResult on_neighbor_broadcast(NodeTriggerState& st, const DeadlineProblem& p,
                                          const DiscreteRuleParams& prm, double t) {
    const auto r = next_interval(p, prm, t);
    st.anchor_time = t;
    st.next_deadline = std::min(st.next_deadline, t + r.xi);
    return r;
}

}  // namespace etpin
