#pragma once

// CSV and manifest writers. Every CSV starts with a "# schema:" comment
// naming its columns, followed by an ordinary header row. Node and mode
// indices are written 1-based.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "etpin/sim_engine.hpp"
#include "etpin/stability_check.hpp"
#include "etpin/trajectory_bounds.hpp"

namespace etpin {

inline constexpr const char* kVersion = "0.3.0";

namespace detail {

inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void header(std::ostream& os, const std::vector<std::string>& cols) {
    std::string line;
    for (std::size_t k = 0; k < cols.size(); ++k) line += (k ? "," : "") + cols[k];
    os << "# schema: " << line << "\n" << line << "\n";
}

}  // namespace detail

inline void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec) {
    using detail::g17;
    std::vector<std::string> cols{"t", "node"};
    for (std::size_t d = 0; d < rec.n; ++d) cols.push_back("x" + std::to_string(d + 1));
    for (std::size_t d = 0; d < rec.n; ++d) cols.push_back("s" + std::to_string(d + 1));
    cols.emplace_back("V");
    detail::header(os, cols);
    for (std::size_t s = 0; s < rec.samples(); ++s) {
        for (std::size_t i = 0; i < rec.m; ++i) {
            os << g17(rec.times[s]) << "," << i + 1;
            for (std::size_t d = 0; d < rec.n; ++d) os << "," << g17(rec.states[(s * rec.m + i) * rec.n + d]);
            for (std::size_t d = 0; d < rec.n; ++d) os << "," << g17(rec.targets[s * rec.n + d]);
            os << "," << g17(rec.lyapunov[s]) << "\n";
        }
    }
}

inline void write_events_csv(std::ostream& os, const EventLog& log) {
    detail::header(os, {"t", "node", "cause"});
    for (const auto& e : log.events) os << detail::g17(e.time) << "," << e.node + 1 << "," << cause_name(e.cause) << "\n";
}

inline void write_modes_csv(std::ostream& os, const ModePath& path) {
    detail::header(os, {"u", "t_start", "t_end"});
    for (const auto& seg : path.segments)
        os << seg.mode + 1 << "," << detail::g17(seg.start) << "," << detail::g17(seg.end) << "\n";
}

/// Rule-violation events per node with time in [from, to].
inline std::vector<std::size_t> trigger_histogram(const EventLog& log, std::size_t m, double from, double to) {
    std::vector<std::size_t> counts(m, 0);
    for (const auto& e : log.events)
        if (e.cause == TriggerCause::RuleViolation && e.time >= from && e.time <= to) ++counts[e.node];
    return counts;
}

inline void write_histogram_csv(std::ostream& os, const std::vector<std::size_t>& counts) {
    detail::header(os, {"node", "count"});
    for (std::size_t i = 0; i < counts.size(); ++i) os << i + 1 << "," << counts[i] << "\n";
}

inline void write_ensemble_csv(std::ostream& os, const EnsembleResult& ens) {
    using detail::g17;
    std::vector<std::string> cols{"t"};
    for (std::size_t i = 0; i < ens.m; ++i) cols.push_back("mean_sq_err_node_" + std::to_string(i + 1));
    for (const char* c : {"mean_max_sq_err", "ci_lo", "ci_hi", "mean_V"}) cols.emplace_back(c);
    detail::header(os, cols);
    for (std::size_t s = 0; s < ens.times.size(); ++s) {
        os << g17(ens.times[s]);
        for (std::size_t i = 0; i < ens.m; ++i) os << "," << g17(ens.mean_sq_err[s * ens.m + i]);
        os << "," << g17(ens.mean_max_sq_err[s]) << "," << g17(ens.mean_max_sq_err[s] - ens.ci_half_width[s]) << ","
           << g17(ens.mean_max_sq_err[s] + ens.ci_half_width[s]) << "," << g17(ens.mean_lyapunov[s]) << "\n";
    }
}

/// One V column per run, sampled on the shared recording grid.
inline void write_lyapunov_overlay_csv(std::ostream& os, const std::vector<std::pair<std::string, TrajectoryRecord>>& runs) {
    std::vector<std::string> cols{"t"};
    for (const auto& [name, _] : runs) cols.push_back("V_" + name);
    detail::header(os, cols);
    if (runs.empty()) return;
    const auto& times = runs.front().second.times;
    for (std::size_t s = 0; s < times.size(); ++s) {
        os << detail::g17(times[s]);
        for (const auto& [_, rec] : runs) os << "," << detail::g17(rec.lyapunov.at(s));
        os << "\n";
    }
}

inline void write_bounds_csv(std::ostream& os, const std::vector<SoundnessRow>& rows) {
    using detail::g17;
    detail::header(os, {"trial", "t", "rho", "deviation", "varrho", "distance"});
    for (const auto& r : rows)
        os << r.trial << "," << g17(r.t) << "," << g17(r.rho) << "," << g17(r.deviation) << "," << g17(r.varrho) << ","
           << g17(r.distance) << "\n";
}

inline void write_certificate(std::ostream& os, const StabilityCertificate& cert, double zeno_bound) {
    using detail::g17;
    for (std::size_t u = 0; u < cert.margins.size(); ++u) os << "margin_mode_" << u + 1 << " = " << g17(cert.margins[u]) << "\n";
    os << "lambda_lo = " << g17(cert.lambda_lo) << "\n";
    os << "lambda_hi = " << g17(cert.lambda_hi) << "\n";
    os << "threshold_coeff = " << (cert.threshold_coeff ? g17(*cert.threshold_coeff) : std::string("n/a")) << "\n";
    os << "zeno_lower_bound = " << g17(zeno_bound) << "\n";
    os << "feasible = " << (cert.feasible ? "true" : "false") << "\n";
}

struct RunManifest {
    std::string digest;
    std::uint64_t seed = 0;
    std::string version = kVersion;
    std::vector<std::filesystem::path> outputs;
    double wall_seconds = 0.0;
    std::vector<std::pair<std::string, std::string>> extra;  // e.g. fitted_rate
};

inline void write_manifest(std::ostream& os, const RunManifest& man) {
    os << "digest = " << man.digest << "\n";
    os << "seed = " << man.seed << "\n";
    os << "version = " << man.version << "\n";
    os << "wall_seconds = " << detail::g17(man.wall_seconds) << "\n";
    for (const auto& [k, v] : man.extra) os << k << " = " << v << "\n";
    for (const auto& p : man.outputs) os << "output = " << p.string() << "\n";
}

/// Opens `path` for writing, creating parent directories.
inline std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    return out;
}

template <class Writer>
std::filesystem::path write_file(const std::filesystem::path& path, Writer&& w) {
    auto out = open_output(path);
    w(out);
    if (!out) throw std::runtime_error("error while writing '" + path.string() + "'");
    return path;
}

}  // namespace etpin
