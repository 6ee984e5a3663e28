#pragma once

// Closed-loop simulation of the pinned network with held (event-triggered)
// diffusion and pinning terms.
//
// Time advances on the grid k*dt with explicit Euler; steps are split at
// mode-switch instants. At every instant t the engine processes, in order:
//   1. mode switch (all nodes refresh their held data),
//   2. due deadlines (discrete) or rule checks (continuous),
//   3. broadcast fan-out and re-anchoring of neighbors (discrete),
// and then integrates to the next instant.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "etpin/event_rules.hpp"
#include "etpin/linalg.hpp"
#include "etpin/markov_chain.hpp"
#include "etpin/net_topology.hpp"
#include "etpin/node_dynamics.hpp"
#include "etpin/stability_check.hpp"
#include "etpin/trajectory_bounds.hpp"

namespace etpin {

struct ControlParams {
    double c = 20.0;
    double epsilon = 0.5;
    double delta = 0.03;
    double a = 0.5;
    double b = 0.5;
    Rule rule = Rule::ContState;
    GeneratorKind generator = GeneratorKind::ClosedForm;
    double inflation = 1.1;
    std::optional<double> mu;  // default_mu(sigma) when unset
    double xi_max = 1.0;
};

struct InitialConditions {
    std::vector<double> states;  // m*n, node-major
    std::vector<double> target;  // s(0)
};

struct SimConfig {
    SwitchingNetwork network;
    NodeDynamics dynamics;
    QuadParams quad;
    PFamily P;
    double certificate_tolerance = 1e-9;
    ControlParams control;
    double dt = 1e-3;
    double horizon = 10.0;
    std::size_t record_stride = 10;
    std::size_t trials = 1;
    std::uint64_t seed = 1;
    std::optional<std::size_t> initial_mode;  // drawn uniformly per trial when unset
    InitialConditions initial;

    std::size_t m() const { return network.node_count(); }
    std::size_t n() const { return dynamics.dimension; }
};

inline std::size_t grid_steps(const SimConfig& cfg) {
    return static_cast<std::size_t>(std::llround(cfg.horizon / cfg.dt));
}

/// Threshold coefficient of the state-dependent rules for this configuration.
inline double state_rule_coefficient(const SimConfig& cfg) {
    const auto lb = lambda_bounds(cfg.P, cfg.quad.G);
    return threshold_coefficient(cfg.quad.beta, lb.lo, lb.hi, cfg.control.delta, cfg.control.c);
}

/// Certificate for the configured network, gains and P family, with the
/// state-rule coefficient attached when delta is admissible.
inline StabilityCertificate certify(const SimConfig& cfg) {
    auto cert = check_condition(cfg.network, cfg.P, cfg.quad.G, cfg.quad.Gamma,
                                {cfg.quad.alpha, cfg.control.c, cfg.control.epsilon}, cfg.certificate_tolerance);
    try {
        cert.threshold_coeff = threshold_coefficient(cfg.quad.beta, cert.lambda_lo, cert.lambda_hi, cfg.control.delta,
                                                     cfg.control.c);
    } catch (const std::invalid_argument&) {
        cert.threshold_coeff.reset();
    }
    return cert;
}

/// Invariant violations of a run description; empty when valid.
inline std::vector<std::string> validate_sim_config(const SimConfig& cfg) {
    std::vector<std::string> out = validate_network(cfg.network);
    const std::size_t m = cfg.m(), n = cfg.n();
    if (n == 0 || !cfg.dynamics.field) out.emplace_back("dynamics: no vector field");
    if (!(cfg.dt > 0.0)) out.emplace_back("simulation.dt must be positive");
    if (!(cfg.horizon >= cfg.dt)) out.emplace_back("simulation.horizon must be at least dt");
    if (cfg.dt > 0.0 && std::abs(cfg.horizon / cfg.dt - std::round(cfg.horizon / cfg.dt)) > 1e-6)
        out.emplace_back("simulation.horizon must be a multiple of dt");
    if (cfg.record_stride == 0) out.emplace_back("simulation.record_stride must be at least 1");
    if (cfg.trials == 0) out.emplace_back("simulation.trials must be at least 1");
    if (cfg.initial_mode && *cfg.initial_mode >= cfg.network.mode_count())
        out.emplace_back("network.initial_mode out of range");
    if (cfg.initial.states.size() != m * n)
        out.push_back("initial.states must hold " + std::to_string(m) + " nodes of dimension " + std::to_string(n));
    if (cfg.initial.target.size() != n) out.push_back("initial.target must have dimension " + std::to_string(n));
    if (cfg.quad.G.rows() != n || !cfg.quad.G.square()) out.emplace_back("quad.G must be n x n");
    if (cfg.quad.Gamma.rows() != n || !cfg.quad.Gamma.square()) out.emplace_back("quad.Gamma must be n x n");
    if (cfg.P.size() != cfg.network.mode_count()) out.emplace_back("certificate.P must list one diagonal per mode");
    for (const auto& d : cfg.P)
        if (d.size() != m) out.emplace_back("certificate.P diagonals must have one entry per node");
    const auto& k = cfg.control;
    if (k.c < 0.0) out.emplace_back("control.c must be nonnegative");
    if (k.epsilon < 0.0) out.emplace_back("control.epsilon must be nonnegative");
    if (!(k.xi_max >= cfg.dt)) out.emplace_back("control.xi_max must be at least dt");
    if (!(k.inflation >= 1.0)) out.emplace_back("control.inflation must be at least 1");
    if (k.mu && !(*k.mu > 0.0)) out.emplace_back("control.mu must be positive");
    if (!uses_state_threshold(k.rule) && !(k.a > 0.0 && k.b > 0.0))
        out.emplace_back("control.a and control.b must be positive for " + std::string(rule_name(k.rule)));
    if (uses_state_threshold(k.rule) && k.c > 0.0 && cfg.quad.G.square() && cfg.quad.G.rows() == n) {
        if (!(cfg.quad.beta > 0.0)) out.emplace_back("quad.beta must be positive for " + std::string(rule_name(k.rule)));
        try {
            const auto lb = lambda_bounds(cfg.P, cfg.quad.G);
            const double limit = max_admissible_delta(cfg.quad.beta, lb);
            if (!(k.delta > 0.0) || k.delta > limit * (1.0 + 1e-12))
                out.push_back("control.delta = " + detail::fmt_number(k.delta) +
                              " violates 0 < delta <= 2*beta*lambda_lo/lambda_hi = " + detail::fmt_number(limit));
        } catch (const std::exception& e) {
            out.emplace_back(e.what());
        }
    }
    return out;
}

/// x_i <- x_i + dt (f(x_i) + theta_i);  s <- s + dt f(s).
inline void euler_step(std::span<double> states, std::span<double> target, std::span<const double> controls,
                       const NodeDynamics& dyn, double dt, double t = 0.0) {
    const std::size_t n = dyn.dimension;
    const std::size_t m = n == 0 ? 0 : states.size() / n;
    std::vector<double> f(n);
    for (std::size_t i = 0; i < m; ++i) {
        auto xi = states.subspan(i * n, n);
        dyn.field(xi, f);
        for (std::size_t d = 0; d < n; ++d) {
            xi[d] += dt * (f[d] + controls[i * n + d]);
            if (!std::isfinite(xi[d])) throw IntegrationBlowUp("state of node " + std::to_string(i + 1) + " blew up", t + dt);
        }
    }
    dyn.field(target, f);
    for (std::size_t d = 0; d < n; ++d) {
        target[d] += dt * f[d];
        if (!std::isfinite(target[d])) throw IntegrationBlowUp("target trajectory blew up", t + dt);
    }
}

/// V = 1/2 sum_i P_ii xhat_i^T G xhat_i
inline double lyapunov_value(std::span<const double> xhat, std::span<const double> p_diag, const Matrix& g) {
    const std::size_t n = g.rows();
    if (xhat.size() != p_diag.size() * n) throw std::invalid_argument("lyapunov_value: dimension mismatch");
    double v = 0.0;
    for (std::size_t i = 0; i < p_diag.size(); ++i) {
        const auto xi = xhat.subspan(i * n, n);
        double q = 0.0;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) q += xi[r] * g(r, c) * xi[c];
        v += p_diag[i] * q;
    }
    return 0.5 * v;
}

struct TrajectoryRecord {
    std::size_t m = 0;
    std::size_t n = 0;
    std::vector<double> times;
    std::vector<double> states;     // samples * m * n
    std::vector<double> targets;    // samples * n
    std::vector<double> lyapunov;   // samples
    std::vector<double> sq_err;     // samples * m, |x_i - s|^2
    std::vector<std::size_t> modes; // samples

    std::size_t samples() const { return times.size(); }
    double max_sq_err(std::size_t sample) const {
        double worst = 0.0;
        for (std::size_t i = 0; i < m; ++i) worst = std::max(worst, sq_err[sample * m + i]);
        return worst;
    }
};

struct IntervalStats {
    std::size_t count = 0;
    double min = INFINITY;
    double mean = 0.0;

    void add(double dt) {
        ++count;
        min = std::min(min, dt);
        mean += (dt - mean) / static_cast<double>(count);
    }
};

struct EventLog {
    std::vector<TriggerEvent> events;
    std::vector<std::size_t> trigger_counts;  // rule-violation events per node
    IntervalStats intervals;  // between consecutive rule-violation events with no re-anchor in between

    std::size_t total_triggers() const {
        std::size_t s = 0;
        for (auto c : trigger_counts) s += c;
        return s;
    }
};

struct TrialResult {
    TrajectoryRecord record;
    EventLog events;
    ModePath path;
    std::size_t clamped_deadlines = 0;  // discrete searches that fell back to xi_min
};

class TrialRunner {
public:
    TrialRunner(const SimConfig& cfg, std::uint64_t seed) : cfg_(&cfg) {
        Rng rng(seed);
        const std::size_t u0 = cfg.initial_mode ? *cfg.initial_mode : draw_initial_mode(cfg.network, rng);
        path_ = generate_path(cfg.network, u0, cfg.horizon, rng);
        prepare();
    }

    TrialRunner(const SimConfig& cfg, ModePath path) : cfg_(&cfg), path_(std::move(path)) { prepare(); }

    void initialize() {
        t_ = 0.0;
        k_ = 0;
        states_ = cfg_->initial.states;
        target_ = cfg_->initial.target;
        for (std::size_t i = 0; i < m_; ++i) {
            apply_event(nodes_[i], mode(), states_, target_, 0.0, coupling_);
            copy_control(i);
            log(i, TriggerCause::Initialization);
        }
        if (discrete_ && coupling_active_)
            for (std::size_t i = 0; i < m_; ++i) schedule(i);
        record_sample();
    }

    bool done() const { return k_ >= steps_; }

    /// Integrates to the next grid point or switch instant and processes it.
    void advance() {
        const double next_grid = static_cast<double>(k_ + 1) * cfg_->dt;
        const double merge = 1e-9 * cfg_->dt;
        double next = next_grid;
        bool at_switch = false;
        bool on_grid = true;
        if (switch_idx_ < switches_.size()) {
            const double sw = switches_[switch_idx_];
            if (sw < next_grid - merge) {
                next = sw;
                at_switch = true;
                on_grid = false;
            } else if (sw <= next_grid + merge) {
                at_switch = true;
            }
        }
        euler_step(states_, target_, controls_, cfg_->dynamics, next - t_, t_);
        if (on_grid) {
            ++k_;
            t_ = static_cast<double>(k_) * cfg_->dt;
        } else {
            t_ = next;
        }
        if (at_switch) {
            ++switch_idx_;
            mode_idx_ = path_.segments[switch_idx_].mode;
        }
        process_instant(at_switch);
        if (on_grid && k_ % cfg_->record_stride == 0) record_sample();
    }

    TrialResult run() {
        initialize();
        while (!done()) advance();
        TrialResult out;
        out.record = std::move(record_);
        out.events = std::move(log_);
        out.path = path_;
        out.clamped_deadlines = clamped_;
        return out;
    }

    double time() const { return t_; }
    std::size_t mode_index() const { return mode_idx_; }
    const GraphMode& mode() const { return cfg_->network.modes[mode_idx_]; }
    std::span<const double> states() const { return states_; }
    std::span<const double> target() const { return target_; }
    std::span<const double> controls() const { return controls_; }
    const NodeTriggerState& node_state(std::size_t i) const { return nodes_[i]; }
    /// |z_i| used by the most recent continuous-monitoring check.
    double last_z_norm(std::size_t i) const { return last_z_[i]; }
    double coefficient() const { return coeff_; }
    const ModePath& path() const { return path_; }
    const EventLog& event_log() const { return log_; }

private:
    void prepare() {
        const auto problems = validate_sim_config(*cfg_);
        if (!problems.empty()) throw std::invalid_argument("invalid simulation config: " + problems.front());
        m_ = cfg_->m();
        n_ = cfg_->n();
        steps_ = grid_steps(*cfg_);
        const auto& k = cfg_->control;
        coupling_ = {k.c, k.epsilon, cfg_->quad.Gamma};
        coupling_active_ = k.c != 0.0;
        discrete_ = is_discrete(k.rule);
        if (uses_state_threshold(k.rule) && coupling_active_) coeff_ = state_rule_coefficient(*cfg_);
        gamma_norm_ = spectral_norm(cfg_->quad.Gamma);

        rule_params_.rule = k.rule;
        rule_params_.coeff = coeff_;
        rule_params_.a = k.a;
        rule_params_.b = k.b;
        rule_params_.bounds = {cfg_->dynamics.lipschitz, cfg_->dynamics.one_sided,
                               k.mu ? *k.mu : default_mu(cfg_->dynamics.one_sided)};
        rule_params_.search = {cfg_->dt, cfg_->dt, k.xi_max};
        rule_params_.generator = k.generator;
        rule_params_.inflation = k.inflation;
        rule_params_.dynamics = &cfg_->dynamics;

        switches_ = path_.switch_times();
        switch_idx_ = 0;
        mode_idx_ = path_.segments.front().mode;
        nodes_.assign(m_, {});
        for (std::size_t i = 0; i < m_; ++i) nodes_[i].node = i;
        controls_.assign(m_ * n_, 0.0);
        last_z_.assign(m_, 0.0);
        last_rule_event_.assign(m_, std::numeric_limits<double>::quiet_NaN());
        log_ = {};
        log_.trigger_counts.assign(m_, 0);
        record_ = {};
        record_.m = m_;
        record_.n = n_;
    }

    void copy_control(std::size_t i) {
        std::copy(nodes_[i].held_control.begin(), nodes_[i].held_control.end(), controls_.begin() + i * n_);
    }

    void log(std::size_t i, TriggerCause cause) {
        log_.events.push_back({i, t_, cause});
        if (cause == TriggerCause::RuleViolation) {
            ++log_.trigger_counts[i];
            if (!std::isnan(last_rule_event_[i])) log_.intervals.add(t_ - last_rule_event_[i]);
            last_rule_event_[i] = t_;
        } else {
            last_rule_event_[i] = std::numeric_limits<double>::quiet_NaN();
        }
    }

    DeadlineProblem problem_for(std::size_t i) const {
        return build_deadline_problem(i, mode(), states_, target_, controls_, cfg_->control.epsilon, gamma_norm_);
    }

    void schedule(std::size_t i) {
        if (schedule_deadline(nodes_[i], problem_for(i), rule_params_, t_).clamped) ++clamped_;
    }

    void process_instant(bool switched) {
        if (switched) {
            for (std::size_t i = 0; i < m_; ++i) {
                on_mode_switch(nodes_[i], mode(), states_, target_, t_, coupling_);
                copy_control(i);
                log(i, TriggerCause::ModeSwitch);
            }
            if (discrete_ && coupling_active_)
                for (std::size_t i = 0; i < m_; ++i) schedule(i);
        }
        // Without coupling there is nothing to update.
        if (!coupling_active_) return;

        std::vector<std::size_t> fired;
        const auto& k = cfg_->control;
        if (!discrete_) {
            for (std::size_t i = 0; i < m_; ++i) {
                const auto& st = nodes_[i];
                last_z_[i] = norm2(compute_zi(i, states_, target_, st.held_states, st.held_target, mode(), k.epsilon,
                                              cfg_->quad.Gamma));
                const bool violated =
                    k.rule == Rule::ContState
                        ? rule1_check(last_z_[i], distance2(node_block(states_, i, n_), target_), coeff_)
                        : rule2_check(last_z_[i], t_, k.a, k.b);
                if (violated) fired.push_back(i);
            }
        } else {
            const double due = t_ + 1e-9 * cfg_->dt;
            for (std::size_t i = 0; i < m_; ++i)
                if (nodes_[i].next_deadline <= due) fired.push_back(i);
        }

        for (std::size_t i : fired) {
            apply_event(nodes_[i], mode(), states_, target_, t_, coupling_);
            copy_control(i);
            log(i, TriggerCause::RuleViolation);
        }
        if (!discrete_ || fired.empty()) return;

        std::vector<char> is_fired(m_, 0), notified(m_, 0);
        for (std::size_t i : fired) is_fired[i] = 1;
        for (std::size_t i : fired) schedule(i);
        for (std::size_t i : fired)
            for (std::size_t j : mode().neighbors(i))
                if (!is_fired[j]) notified[j] = 1;
        for (std::size_t j = 0; j < m_; ++j) {
            if (!notified[j]) continue;
            if (on_neighbor_broadcast(nodes_[j], problem_for(j), rule_params_, t_).clamped) ++clamped_;
            log(j, TriggerCause::NeighborBroadcast);
        }
    }

    void record_sample() {
        std::vector<double> xhat(m_ * n_);
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t d = 0; d < n_; ++d) xhat[i * n_ + d] = states_[i * n_ + d] - target_[d];
        record_.times.push_back(t_);
        record_.states.insert(record_.states.end(), states_.begin(), states_.end());
        record_.targets.insert(record_.targets.end(), target_.begin(), target_.end());
        record_.lyapunov.push_back(lyapunov_value(xhat, cfg_->P[mode_idx_], cfg_->quad.G));
        for (std::size_t i = 0; i < m_; ++i) {
            double s = 0.0;
            for (std::size_t d = 0; d < n_; ++d) s += xhat[i * n_ + d] * xhat[i * n_ + d];
            record_.sq_err.push_back(s);
        }
        record_.modes.push_back(mode_idx_);
    }

    const SimConfig* cfg_;
    ModePath path_;
    std::size_t m_ = 0, n_ = 0, steps_ = 0, k_ = 0;
    double t_ = 0.0;
    CouplingParams coupling_;
    bool coupling_active_ = true;
    bool discrete_ = false;
    double coeff_ = 0.0;
    double gamma_norm_ = 1.0;
    DiscreteRuleParams rule_params_;
    std::vector<double> switches_;
    std::size_t switch_idx_ = 0;
    std::size_t mode_idx_ = 0;
    std::vector<NodeTriggerState> nodes_;
    std::vector<double> states_, target_, controls_, last_z_, last_rule_event_;
    EventLog log_;
    TrajectoryRecord record_;
    std::size_t clamped_ = 0;
};

inline TrialResult run_trial(const SimConfig& cfg, std::uint64_t seed) { return TrialRunner(cfg, seed).run(); }

/// Decay rate from a least-squares line through (t, ln y); nonpositive y are skipped.
inline double fit_decay_rate(std::span<const double> t, std::span<const double> y) {
    if (t.size() != y.size()) throw std::invalid_argument("fit_decay_rate: size mismatch");
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (!(y[k] > 0.0)) continue;
        const double ly = std::log(y[k]);
        st += t[k];
        sy += ly;
        stt += t[k] * t[k];
        sty += t[k] * ly;
        ++count;
    }
    if (count < 2) throw std::invalid_argument("fit_decay_rate: need at least two positive samples");
    const double nn = static_cast<double>(count);
    const double denom = nn * stt - st * st;
    if (denom == 0.0) throw std::invalid_argument("fit_decay_rate: degenerate time samples");
    return -(nn * sty - st * sy) / denom;
}

struct EnsembleResult {
    std::size_t trials = 0;
    std::size_t m = 0;
    std::vector<double> times;
    std::vector<double> mean_sq_err;      // samples * m, E|x_i - s|^2
    std::vector<double> mean_max_sq_err;  // E max_i |x_i - s|^2
    std::vector<double> ci_half_width;    // 95% normal band on mean_max_sq_err
    std::vector<double> mean_lyapunov;
    double fitted_rate = 0.0;      // from mean_max_sq_err
    double lyapunov_rate = 0.0;    // from mean_lyapunov
    double mean_triggers = 0.0;
    double min_interval = INFINITY;
    std::size_t clamped_deadlines = 0;
    std::vector<std::size_t> triggers_per_trial;
};

class EnsembleError : public std::runtime_error {
public:
    EnsembleError(std::size_t trial, const std::string& what)
        : std::runtime_error("trial " + std::to_string(trial) + " failed, ensemble invalid: " + what), trial_(trial) {}
    std::size_t trial() const noexcept { return trial_; }

private:
    std::size_t trial_;
};

/// Independent trials with seeds seed + index, shared initial conditions.
/// Trials run concurrently; the reduction is ordered by trial index.
inline EnsembleResult run_ensemble(const SimConfig& cfg, unsigned threads = 0) {
    if (cfg.trials == 0) throw std::invalid_argument("run_ensemble: trials must be at least 1");
    const std::size_t trials = cfg.trials;
    std::vector<std::optional<TrialResult>> results(trials);
    std::vector<std::exception_ptr> errors(trials);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < trials; k = next++) {
            try {
                results[k] = run_trial(cfg, cfg.seed + k);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, trials));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < threads; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (std::size_t k = 0; k < trials; ++k) {
        if (!errors[k]) continue;
        try {
            std::rethrow_exception(errors[k]);
        } catch (const std::exception& e) {
            throw EnsembleError(k, e.what());
        }
    }

    EnsembleResult out;
    out.trials = trials;
    out.m = cfg.m();
    const auto& first = results.front()->record;
    const std::size_t samples = first.samples();
    out.times = first.times;
    out.mean_sq_err.assign(samples * out.m, 0.0);
    out.mean_max_sq_err.assign(samples, 0.0);
    out.ci_half_width.assign(samples, 0.0);
    out.mean_lyapunov.assign(samples, 0.0);
    std::vector<double> second_moment(samples, 0.0);
    const double inv = 1.0 / static_cast<double>(trials);
    for (const auto& r : results) {
        const auto& rec = r->record;
        for (std::size_t s = 0; s < samples; ++s) {
            for (std::size_t i = 0; i < out.m; ++i) out.mean_sq_err[s * out.m + i] += inv * rec.sq_err[s * out.m + i];
            const double mx = rec.max_sq_err(s);
            out.mean_max_sq_err[s] += inv * mx;
            second_moment[s] += inv * mx * mx;
            out.mean_lyapunov[s] += inv * rec.lyapunov[s];
        }
        const auto trig = r->events.total_triggers();
        out.triggers_per_trial.push_back(trig);
        out.mean_triggers += inv * static_cast<double>(trig);
        out.min_interval = std::min(out.min_interval, r->events.intervals.min);
        out.clamped_deadlines += r->clamped_deadlines;
    }
    if (trials > 1) {
        const double nn = static_cast<double>(trials);
        for (std::size_t s = 0; s < samples; ++s) {
            const double var = std::max(0.0, second_moment[s] - out.mean_max_sq_err[s] * out.mean_max_sq_err[s]) *
                               nn / (nn - 1.0);
            out.ci_half_width[s] = 1.96 * std::sqrt(var / nn);
        }
    }
    auto rate_or_nan = [&](const std::vector<double>& y) {
        try {
            return fit_decay_rate(out.times, y);
        } catch (const std::invalid_argument&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    out.fitted_rate = rate_or_nan(out.mean_max_sq_err);
    out.lyapunov_rate = rate_or_nan(out.mean_lyapunov);
    return out;
}

}  // namespace etpin
