#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "etpin/sim_engine.hpp"
#include "fixtures.hpp"

using namespace etpin;
using Catch::Approx;

namespace {

double max_err(const TrajectoryRecord& r, std::size_t s) { return std::sqrt(r.max_sq_err(s)); }

SimConfig at_equilibrium(Rule rule) {
    auto cfg = fx::benchmark();
    cfg.control.rule = rule;
    cfg.initial.states.clear();
    for (std::size_t i = 0; i < cfg.m(); ++i)
        cfg.initial.states.insert(cfg.initial.states.end(), cfg.initial.target.begin(), cfg.initial.target.end());
    return cfg;
}

}  // namespace

TEST_CASE("euler step", "[sim]") {
    const auto still = make_dynamics("linear", {{"rate", 0.0}});
    std::vector<double> x{1, 2, 3, 4, 5, 6}, s{0.1, 0.2, 0.3};
    const auto x0 = x, s0 = s;
    euler_step(x, s, std::vector<double>(6, 0.0), still, 1e-3);
    CHECK(x == x0);
    CHECK(s == s0);
    std::vector<double> u{1, 0, 0, 0, 0, 0};
    euler_step(x, s, u, still, 1e-3);
    CHECK(x[0] == x0[0] + 1e-3);
    CHECK(x[1] == x0[1]);

    const auto decay = make_dynamics("linear", {{"rate", 1.0}, {"dim", 1.0}});
    std::vector<double> y{2.0}, t{0.0};
    for (int k = 0; k < 500; ++k) euler_step(y, t, std::vector<double>{0.0}, decay, 1e-3);
    CHECK(y[0] == Approx(2.0 * std::pow(1.0 - 1e-3, 500)).epsilon(1e-13));

    const auto still1 = make_dynamics("linear", {{"rate", 0.0}, {"dim", 1.0}});
    std::vector<double> big{1e308}, tt{0.0};
    try {
        euler_step(big, tt, std::vector<double>{1e308}, still1, 10.0, 4.5);
        FAIL("expected blow-up");
    } catch (const IntegrationBlowUp& e) {
        CHECK(e.time() == Approx(14.5));
    }
}

TEST_CASE("lyapunov value", "[sim]") {
    const Matrix g = Matrix::identity(3);
    const std::vector<double> zero(6, 0.0), ones{1, 1, 1, 1, 1, 1};
    CHECK(lyapunov_value(zero, std::vector<double>{1, 1}, g) == 0.0);
    CHECK(lyapunov_value(ones, std::vector<double>{1, 1}, g) == Approx(3.0));
    CHECK(lyapunov_value(std::vector<double>{1, 0, 0, 0, 0, 0}, std::vector<double>{2, 1}, g) == Approx(1.0));
    CHECK_THROWS_AS(lyapunov_value(ones, std::vector<double>{1}, g), std::invalid_argument);
}

TEST_CASE("uncoupled network never triggers", "[sim]") {
    for (Rule r : all_rules) {
        auto cfg = fx::benchmark();
        cfg.control.rule = r;
        cfg.control.c = 0.0;
        cfg.control.epsilon = 0.0;
        cfg.horizon = 1.0;
        TrialRunner run(cfg, 3);
        run.initialize();
        while (!run.done()) {
            run.advance();
            for (double v : run.controls()) REQUIRE(v == 0.0);
        }
        CHECK(run.event_log().total_triggers() == 0);
    }
}

TEST_CASE("benchmark state rule contracts the error", "[sim]") {
    const auto cfg = fx::benchmark();
    const auto res = run_trial(cfg, cfg.seed);
    const auto& rec = res.record;
    CHECK(rec.samples() == grid_steps(cfg) / cfg.record_stride + 1);
    CHECK(rec.lyapunov.back() < rec.lyapunov.front());
    CHECK(max_err(rec, rec.samples() - 1) < max_err(rec, 0));
    CHECK(rec.times.back() == Approx(10.0));
}

TEST_CASE("same seed gives identical trials", "[sim]") {
    auto cfg = fx::benchmark();
    cfg.control.rule = Rule::DiscState;
    cfg.horizon = 2.0;
    const auto a = run_trial(cfg, 5), b = run_trial(cfg, 5);
    CHECK(a.record.states == b.record.states);
    CHECK(a.record.lyapunov == b.record.lyapunov);
    CHECK(a.events.events == b.events.events);
    const auto c = run_trial(cfg, 6);
    CHECK(a.record.states != c.record.states);
}

TEST_CASE("single-trial ensemble equals the trial", "[sim]") {
    auto cfg = fx::benchmark();
    cfg.horizon = 1.0;
    cfg.trials = 1;
    const auto ens = run_ensemble(cfg);
    const auto one = run_trial(cfg, cfg.seed);
    CHECK(ens.mean_lyapunov == one.record.lyapunov);
    for (std::size_t s = 0; s < one.record.samples(); ++s) CHECK(ens.mean_max_sq_err[s] == one.record.max_sq_err(s));
    CHECK(ens.mean_sq_err == one.record.sq_err);
    CHECK(ens.mean_triggers == double(one.events.total_triggers()));
}

TEST_CASE("ensemble is independent of the thread count", "[sim]") {
    auto cfg = fx::benchmark();
    cfg.horizon = 0.5;
    cfg.trials = 6;
    const auto a = run_ensemble(cfg, 1), b = run_ensemble(cfg, 4);
    CHECK(a.mean_max_sq_err == b.mean_max_sq_err);
    CHECK(a.triggers_per_trial == b.triggers_per_trial);
}

TEST_CASE("a failing trial invalidates the ensemble", "[sim]") {
    auto cfg = fx::benchmark();
    cfg.horizon = 1.0;
    cfg.trials = 3;
    cfg.dynamics = make_dynamics("linear", {{"rate", -3000.0}});
    CHECK_THROWS_AS(run_ensemble(cfg), EnsembleError);
}

TEST_CASE("equilibrium stays put under every rule", "[sim][property]") {
    for (Rule r : all_rules) {
        const auto cfg = at_equilibrium(r);
        const auto res = run_trial(cfg, 11);
        double worst = 0.0;
        for (std::size_t s = 0; s < res.record.samples(); ++s) worst = std::max(worst, max_err(res.record, s));
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("held controls change only at events", "[sim][property]") {
    for (Rule r : all_rules) {
        auto cfg = fx::benchmark();
        cfg.control.rule = r;
        cfg.horizon = 2.0;
        TrialRunner run(cfg, 4);
        run.initialize();
        std::vector<double> prev(run.controls().begin(), run.controls().end());
        std::size_t seen = run.event_log().events.size();
        while (!run.done()) {
            run.advance();
            const auto& ev = run.event_log().events;
            std::set<std::size_t> touched;
            for (std::size_t k = seen; k < ev.size(); ++k) touched.insert(ev[k].node);
            seen = ev.size();
            for (std::size_t i = 0; i < cfg.m(); ++i) {
                if (touched.count(i)) continue;
                for (std::size_t d = 0; d < 3; ++d) REQUIRE(run.controls()[i * 3 + d] == prev[i * 3 + d]);
            }
            prev.assign(run.controls().begin(), run.controls().end());
        }
    }
}

TEST_CASE("recomputed error matches the value used for triggering", "[sim][property]") {
    for (Rule r : {Rule::ContState, Rule::ContExp}) {
        auto cfg = fx::benchmark();
        cfg.control.rule = r;
        cfg.horizon = 2.0;
        TrialRunner run(cfg, 9);
        run.initialize();
        while (!run.done()) {
            const auto before = run.event_log().events.size();
            run.advance();
            const auto& ev = run.event_log().events;
            std::set<std::size_t> fired;
            for (std::size_t k = before; k < ev.size(); ++k) fired.insert(ev[k].node);
            for (std::size_t i = 0; i < cfg.m(); ++i) {
                if (fired.count(i)) continue;  // snapshot was refreshed after the check
                const auto& st = run.node_state(i);
                const double z = norm2(compute_zi(i, run.states(), run.target(), st.held_states, st.held_target,
                                                  run.mode(), cfg.control.epsilon, cfg.quad.Gamma));
                REQUIRE(z == run.last_z_norm(i));
            }
        }
    }
}

TEST_CASE("event log ordering, switches and broadcasts", "[sim][property]") {
    for (Rule r : all_rules) {
        auto cfg = fx::benchmark();
        cfg.control.rule = r;
        cfg.horizon = 3.0;
        const auto res = run_trial(cfg, 21);
        std::map<std::size_t, double> last;
        std::map<double, std::set<std::size_t>> fired, told;
        std::map<double, std::set<std::size_t>> switched;
        std::map<double, std::size_t> mode_at;
        for (const auto& e : res.events.events) {
            if (last.count(e.node)) CHECK(e.time > last[e.node]);
            last[e.node] = e.time;
            if (e.cause == TriggerCause::RuleViolation) fired[e.time].insert(e.node);
            if (e.cause == TriggerCause::NeighborBroadcast) told[e.time].insert(e.node);
            if (e.cause == TriggerCause::ModeSwitch) switched[e.time].insert(e.node);
        }
        // every switch instant refreshes every node, at the exact switch time
        const auto sw = res.path.switch_times();
        CHECK(switched.size() == sw.size());
        for (double t : sw) CHECK(switched[t].size() == cfg.m());

        if (!is_discrete(r)) {
            CHECK(told.empty());
            continue;
        }
        // broadcasts reach exactly the current-mode neighbors that did not fire themselves
        for (const auto& [t, nodes] : fired) {
            const auto& mode = cfg.network.modes[res.path.mode_at(t)];
            std::set<std::size_t> expect;
            for (std::size_t i : nodes)
                for (std::size_t j : mode.neighbors(i))
                    if (!nodes.count(j)) expect.insert(j);
            CHECK(told[t] == expect);
        }
    }
}

TEST_CASE("an isolated node's events reach nobody", "[sim]") {
    auto net = fx::single_mode({{1, 2}}, 3, {1, 3});
    auto cfg = fx::small_config(net, make_chua(ChuaParams{}), Rule::DiscExp);
    const auto res = run_trial(cfg, 1);
    std::size_t node3 = 0;
    for (const auto& e : res.events.events) {
        if (e.node == 2 && e.cause == TriggerCause::RuleViolation) ++node3;
        CHECK_FALSE((e.node == 2 && e.cause == TriggerCause::NeighborBroadcast));
        if (e.cause == TriggerCause::NeighborBroadcast) CHECK(e.node < 2);
    }
    CHECK(node3 > 0);
}

TEST_CASE("static all-pinned network decays at least at half of min(2b, delta)", "[sim]") {
    auto net = fx::single_mode({{1, 2}, {2, 3}}, 3, {1, 2, 3});
    auto cfg = fx::small_config(net, make_chua(ChuaParams{}), Rule::ContExp);
    cfg.control.c = 20.0;
    cfg.control.epsilon = 1.0;
    cfg.horizon = 5.0;
    cfg.trials = 4;
    REQUIRE(certify(cfg).feasible);
    const auto ens = run_ensemble(cfg);
    const double floor = std::min(2.0 * cfg.control.b, cfg.control.delta);
    CHECK(ens.fitted_rate >= 0.5 * floor);
}

TEST_CASE("halving dt barely moves V(10)", "[dt-halving]") {
    // benchmark as configured; V(10) is ~27 e-folds below V(0), so O(dt) rate error gets amplified
    auto cfg = fx::benchmark();
    const auto coarse = run_trial(cfg, cfg.seed);
    cfg.dt /= 2.0;
    cfg.record_stride *= 2;
    const auto fine = run_trial(cfg, cfg.seed);
    const double a = coarse.record.lyapunov.back(), b = fine.record.lyapunov.back();
    INFO("V(10) at dt: " << a << ", at dt/2: " << b);
    CHECK(std::abs(a - b) <= 0.05 * std::abs(a));
}

TEST_CASE("config validation covers the run invariants", "[sim]") {
    auto cfg = fx::benchmark();
    CHECK(validate_sim_config(cfg).empty());
    cfg.dt = 0.0;
    cfg.control.delta = 1.9;
    cfg.trials = 0;
    const auto v = validate_sim_config(cfg);
    CHECK(v.size() >= 3);
    bool delta_msg = false;
    for (const auto& s : v) delta_msg = delta_msg || s.find("control.delta = 1.9 violates") != std::string::npos;
    CHECK(delta_msg);
    CHECK_THROWS_AS(TrialRunner(cfg, 1), std::invalid_argument);
}
