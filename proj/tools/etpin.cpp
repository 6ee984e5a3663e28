// etpin: certificate check, simulation runs, ensembles and bound sampling.
//
// Exit status: 0 ok / feasible, 1 infeasible or violation, 2 usage or config error.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "etpin/config.hpp"
#include "etpin/output.hpp"

namespace fs = std::filesystem;
using namespace etpin;

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::string rule;
    std::string out;
    std::string canonical;
    unsigned threads = 0;
};

fs::path out_dir(const Options& o) {
    if (!o.out.empty()) return o.out;
    if (const char* env = std::getenv("ETPIN_OUT_DIR"); env && *env) return env;
    return "out";
}

LoadedConfig load(const Options& o) {
    auto loaded = load_config(o.config);
    for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << "\n";
    if (o.seed) loaded.config.seed = *o.seed;
    if (o.trials) loaded.config.trials = *o.trials;
    return loaded;
}

std::vector<Rule> selected_rules(const Options& o, Rule fallback) {
    if (o.rule.empty()) return {fallback};
    if (o.rule == "all") return {std::begin(all_rules), std::end(all_rules)};
    if (auto r = parse_rule(o.rule)) return {*r};
    throw CLI::ValidationError("--rule", "unknown rule '" + o.rule + "'");
}

double zeno_for(const SimConfig& cfg) {
    const auto& k = cfg.control;
    try {
        return zeno_lower_bound(static_cast<double>(cfg.m()), cfg.dynamics.lipschitz, k.c, k.epsilon, k.a, k.b);
    } catch (const std::invalid_argument&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_check(const Options& o) {
    const auto cfg = load(o).config;
    const auto cert = certify(cfg);
    write_certificate(std::cout, cert, zeno_for(cfg));
    std::cout << "beta = " << detail::g17(cfg.quad.beta) << "\n";
    std::cout << "lipschitz = " << detail::g17(cfg.dynamics.lipschitz) << "\n";
    std::cout << "digest = " << config_digest(cfg) << "\n";
    if (!o.canonical.empty()) write_file(o.canonical, [&](std::ostream& os) { os << canonicalize(cfg); });
    return cert.feasible ? kOk : kViolation;
}

void warn_if_uncertified(const SimConfig& cfg) {
    const auto cert = certify(cfg);
    if (!cert.feasible)
        std::cerr << "warning: stability certificate infeasible for this configuration; the run is exploratory\n";
}

int cmd_run(const Options& o) {
    const auto t0 = std::chrono::steady_clock::now();
    auto cfg = load(o).config;
    warn_if_uncertified(cfg);
    const auto dir = out_dir(o);
    RunManifest man;
    man.seed = cfg.seed;
    std::vector<std::pair<std::string, TrajectoryRecord>> overlay;
    const auto rules = selected_rules(o, cfg.control.rule);
    for (Rule r : rules) {
        cfg.control.rule = r;
        const std::string name(rule_name(r));
        const auto res = run_trial(cfg, cfg.seed);
        man.outputs.push_back(write_file(dir / ("trajectory_" + name + ".csv"),
                                         [&](std::ostream& os) { write_trajectory_csv(os, res.record); }));
        man.outputs.push_back(
            write_file(dir / ("events_" + name + ".csv"), [&](std::ostream& os) { write_events_csv(os, res.events); }));
        const auto hist = trigger_histogram(res.events, cfg.m(), 9.0, 10.0);
        man.outputs.push_back(
            write_file(dir / ("histogram_" + name + ".csv"), [&](std::ostream& os) { write_histogram_csv(os, hist); }));
        if (overlay.empty())
            man.outputs.push_back(
                write_file(dir / "modes.csv", [&](std::ostream& os) { write_modes_csv(os, res.path); }));
        man.extra.emplace_back("triggers_" + name, std::to_string(res.events.total_triggers()));
        std::cout << name << ": triggers " << res.events.total_triggers() << ", V(end) "
                  << res.record.lyapunov.back() << "\n";
        overlay.emplace_back(name, res.record);
    }
    if (overlay.size() > 1)
        man.outputs.push_back(write_file(dir / "lyapunov_overlay.csv",
                                         [&](std::ostream& os) { write_lyapunov_overlay_csv(os, overlay); }));
    cfg.control.rule = rules.front();
    man.digest = config_digest(cfg);
    man.wall_seconds = seconds_since(t0);
    write_file(dir / "manifest.txt", [&](std::ostream& os) { write_manifest(os, man); });
    return kOk;
}

int cmd_ensemble(const Options& o) {
    const auto t0 = std::chrono::steady_clock::now();
    auto cfg = load(o).config;
    warn_if_uncertified(cfg);
    cfg.control.rule = selected_rules(o, cfg.control.rule).front();
    const auto dir = out_dir(o);
    const auto ens = run_ensemble(cfg, o.threads);
    RunManifest man;
    man.seed = cfg.seed;
    man.digest = config_digest(cfg);
    man.outputs.push_back(write_file(dir / "ensemble.csv", [&](std::ostream& os) { write_ensemble_csv(os, ens); }));
    man.extra.emplace_back("rule", std::string(rule_name(cfg.control.rule)));
    man.extra.emplace_back("trials", std::to_string(ens.trials));
    man.extra.emplace_back("fitted_rate", detail::g17(ens.fitted_rate));
    man.extra.emplace_back("lyapunov_rate", detail::g17(ens.lyapunov_rate));
    man.extra.emplace_back("mean_triggers", detail::g17(ens.mean_triggers));
    man.wall_seconds = seconds_since(t0);
    write_file(dir / "manifest.txt", [&](std::ostream& os) { write_manifest(os, man); });
    std::cout << "fitted_rate = " << ens.fitted_rate << "\nmean_triggers = " << ens.mean_triggers << "\n";
    return kOk;
}

int cmd_bounds(const Options& o) {
    const auto cfg = load(o).config;
    SoundnessOptions opt;
    if (o.trials) opt.trials = *o.trials;
    if (o.seed) opt.seed = *o.seed;
    const BoundConstants bc{cfg.dynamics.lipschitz, cfg.dynamics.one_sided,
                            cfg.control.mu ? *cfg.control.mu : default_mu(cfg.dynamics.one_sided)};
    const auto rows = sample_bound_soundness(cfg.dynamics, bc, opt);
    write_file(out_dir(o) / "bounds.csv", [&](std::ostream& os) { write_bounds_csv(os, rows); });
    std::size_t bad = 0;
    for (const auto& r : rows) {
        if (r.rho_ok(1e-6) && r.varrho_ok(1e-6)) continue;
        ++bad;
        std::cerr << "violation: trial " << r.trial << " t=" << r.t << " rho=" << r.rho << " deviation=" << r.deviation
                  << " varrho=" << r.varrho << " distance=" << r.distance << "\n";
    }
    std::cout << rows.size() << " checks, " << bad << " violations\n";
    return bad == 0 ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Event-triggered pinning control of switching networks"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "run description (YAML)")->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", o.seed, "base seed");
        sub->add_option("--out", o.out, "output directory (default $ETPIN_OUT_DIR or ./out)");
    };
    auto* check = app.add_subcommand("check", "certificate report; exit 0 iff feasible");
    common(check);
    check->add_option("--canonical", o.canonical, "also write the resolved config here");
    auto* run = app.add_subcommand("run", "single trial per rule; trajectory, event and mode CSVs");
    common(run);
    run->add_option("--rule", o.rule, "cont-state | cont-exp | disc-state | disc-exp | all");
    auto* ens = app.add_subcommand("ensemble", "Monte-Carlo mean-square statistics");
    common(ens);
    ens->add_option("--trials", o.trials, "number of trials");
    ens->add_option("--rule", o.rule, "cont-state | cont-exp | disc-state | disc-exp");
    ens->add_option("--threads", o.threads, "worker threads (0 = hardware)");
    auto* bounds = app.add_subcommand("bounds-test", "sample rho/varrho soundness against paired integration");
    common(bounds);
    bounds->add_option("--trials", o.trials, "number of random input sets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }
    try {
        if (*check) return cmd_check(o);
        if (*run) return cmd_run(o);
        if (*ens) return cmd_ensemble(o);
        return cmd_bounds(o);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kViolation;
    }
}
