#pragma once

// Bounds for the forced pair
//
//   du/dt = f(u) + theta,     u(0) = u0
//   dv/dt = f(v) + vartheta,  v(0) = v0
//
// rho    : upper bound on |(u(t) - u0) - (v(t) - v0)|   (Lipschitz/Gronwall form)
// varrho : lower bound on |u(t) - v(t)|                 (one-sided Lipschitz form)
//
// The scalar overloads take the gaps |theta - vartheta| and |u0 - v0|
// directly; the event rules evaluate them many times per deadline search.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "etpin/linalg.hpp"
#include "etpin/node_dynamics.hpp"

namespace etpin {

struct BoundConstants {
    double lipschitz = 0.0;  // L_f
    double one_sided = 0.0;  // sigma
    double mu = 1.0;         // free weight of the Young split, > 0
};

/// mu = max(1, -2 sigma) keeps 2 sigma - mu strictly negative.
inline double default_mu(double one_sided) { return std::max(1.0, -2.0 * one_sided); }

struct BoundInputs {
    double t = 0.0;
    std::span<const double> theta;
    std::span<const double> vartheta;
    std::span<const double> u0;
    std::span<const double> v0;
    BoundConstants constants;
};

/// ((g + L d) / L) (exp(L t) - 1); the L -> 0 limit is g t.
inline double rho_lipschitz(double t, double input_gap, double state_gap, double lipschitz) {
    if (t < 0.0) throw std::invalid_argument("rho_lipschitz: negative time");
    if (t == 0.0) return 0.0;
    if (lipschitz == 0.0) return input_gap * t;
    return (input_gap + lipschitz * state_gap) / lipschitz * std::expm1(lipschitz * t);
}

/// sqrt(max(0, e^{kt} d^2 - (g^2/mu)/k (e^{kt} - 1))), k = 2 sigma - mu.
/// At k = 0 the second term becomes (g^2/mu) t.
inline double varrho_one_sided(double t, double input_gap, double state_gap, double one_sided, double mu) {
    if (t < 0.0) throw std::invalid_argument("varrho_one_sided: negative time");
    if (!(mu > 0.0)) throw std::invalid_argument("varrho_one_sided: mu must be positive");
    const double k = 2.0 * one_sided - mu;
    const double growth = std::exp(k * t);
    const double drift = std::abs(k) < 1e-300 ? t : std::expm1(k * t) / k;
    const double value = growth * state_gap * state_gap - (input_gap * input_gap / mu) * drift;
    return std::sqrt(std::max(0.0, value));
}

inline double rho_lipschitz(const BoundInputs& in) {
    return rho_lipschitz(in.t, distance2(in.theta, in.vartheta), distance2(in.u0, in.v0), in.constants.lipschitz);
}

inline double varrho_one_sided(const BoundInputs& in) {
    return varrho_one_sided(in.t, distance2(in.theta, in.vartheta), distance2(in.u0, in.v0), in.constants.one_sided,
                            in.constants.mu);
}

class IntegrationBlowUp : public std::runtime_error {
public:
    IntegrationBlowUp(const std::string& what, double time) : std::runtime_error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Two forced copies of the node dynamics advanced with explicit Euler.
class PairedIntegrator {
public:
    PairedIntegrator(const NodeDynamics& dyn, std::span<const double> theta, std::span<const double> vartheta,
                     std::span<const double> u0, std::span<const double> v0)
        : dyn_(&dyn),
          theta_(theta.begin(), theta.end()),
          vartheta_(vartheta.begin(), vartheta.end()),
          u0_(u0.begin(), u0.end()),
          v0_(v0.begin(), v0.end()),
          u_(u0_),
          v_(v0_),
          fu_(dyn.dimension),
          fv_(dyn.dimension) {
        const std::size_t n = dyn.dimension;
        if (theta_.size() != n || vartheta_.size() != n || u0_.size() != n || v0_.size() != n)
            throw std::invalid_argument("PairedIntegrator: dimension mismatch");
    }

    void step(double h) {
        dyn_->field(u_, fu_);
        dyn_->field(v_, fv_);
        for (std::size_t i = 0; i < u_.size(); ++i) {
            u_[i] += h * (fu_[i] + theta_[i]);
            v_[i] += h * (fv_[i] + vartheta_[i]);
            if (!std::isfinite(u_[i]) || !std::isfinite(v_[i]))
                throw IntegrationBlowUp("paired integration produced a non-finite state", time_ + h);
        }
        time_ += h;
    }

    /// |(u - u0) - (v - v0)|
    double deviation() const {
        double sum = 0.0;
        for (std::size_t i = 0; i < u_.size(); ++i) {
            const double d = (u_[i] - u0_[i]) - (v_[i] - v0_[i]);
            sum += d * d;
        }
        return std::sqrt(sum);
    }

    double distance() const { return distance2(u_, v_); }
    double time() const noexcept { return time_; }

private:
    const NodeDynamics* dyn_;
    std::vector<double> theta_, vartheta_, u0_, v0_, u_, v_, fu_, fv_;
    double time_ = 0.0;
};

struct PairedResult {
    double deviation = 0.0;
    double distance = 0.0;
};

inline PairedResult paired_integration_oracle(const NodeDynamics& dyn, std::span<const double> theta,
                                              std::span<const double> vartheta, std::span<const double> u0,
                                              std::span<const double> v0, double t, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("paired_integration_oracle: dt must be positive");
    const double steps_real = t / dt;
    const auto steps = static_cast<long long>(std::llround(steps_real));
    if (std::abs(steps_real - static_cast<double>(steps)) > 1e-6)
        throw std::invalid_argument("paired_integration_oracle: dt must divide t");
    PairedIntegrator pair(dyn, theta, vartheta, u0, v0);
    for (long long k = 0; k < steps; ++k) pair.step(dt);
    return {pair.deviation(), pair.distance()};
}

struct SoundnessRow {
    std::size_t trial = 0;
    double t = 0.0;
    double rho = 0.0;
    double deviation = 0.0;
    double varrho = 0.0;
    double distance = 0.0;
    std::vector<double> theta, vartheta, u0, v0;

    bool rho_ok(double tol) const { return deviation <= rho + tol; }
    bool varrho_ok(double tol) const { return distance >= varrho - tol; }
};

struct SoundnessOptions {
    std::size_t trials = 1000;
    std::uint64_t seed = 7;
    std::vector<double> times{0.01, 0.05, 0.1};
    double dt = 1e-6;
    double state_range = 2.5;    // u0, v0 uniform in [-r, r]^n
    double control_range = 10.0; // theta, vartheta uniform in [-r, r]^n
};

/// Random forced pairs checked against both bounds at each sample time.
/// Times must be increasing multiples of dt.
inline std::vector<SoundnessRow> sample_bound_soundness(const NodeDynamics& dyn, const BoundConstants& bc,
                                                        const SoundnessOptions& opt) {
    std::mt19937_64 rng(opt.seed);
    const std::size_t n = dyn.dimension;
    auto draw = [&](double r) {
        std::uniform_real_distribution<double> u(-r, r);
        std::vector<double> v(n);
        for (double& x : v) x = u(rng);
        return v;
    };
    std::vector<SoundnessRow> rows;
    rows.reserve(opt.trials * opt.times.size());
    for (std::size_t k = 0; k < opt.trials; ++k) {
        auto u0 = draw(opt.state_range), v0 = draw(opt.state_range);
        auto th = draw(opt.control_range), vth = draw(opt.control_range);
        PairedIntegrator pair(dyn, th, vth, u0, v0);
        long long done = 0;
        for (double t : opt.times) {
            const auto target = std::llround(t / opt.dt);
            for (; done < target; ++done) pair.step(opt.dt);
            const double g = distance2(th, vth), d = distance2(u0, v0);
            rows.push_back({k, t, rho_lipschitz(t, g, d, bc.lipschitz), pair.deviation(),
                            varrho_one_sided(t, g, d, bc.one_sided, bc.mu), pair.distance(), th, vth, u0, v0});
        }
    }
    return rows;
}

}  // namespace etpin
