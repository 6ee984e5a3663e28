#pragma once

// Mode-wise matrix inequality certificate:
//
//   { P(u) [alpha I - c L(u) - c eps D(u)] (x) G Gamma }^sym
//       + 1/2 sum_v q_uv P(v) (x) G  <=  0      for every mode u,
//
// plus the spectral constants and the state-dependent trigger coefficient.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "etpin/linalg.hpp"
#include "etpin/net_topology.hpp"

namespace etpin {

/// Diagonal entries of P(u), one vector per mode.
using PFamily = std::vector<std::vector<double>>;

inline PFamily identity_family(std::size_t modes, std::size_t m) {
    return PFamily(modes, std::vector<double>(m, 1.0));
}

struct CouplingGains {
    double alpha = 0.0;
    double c = 0.0;
    double epsilon = 0.0;
};

struct StabilityCertificate {
    std::vector<double> margins;  // lambda_max of each mode's condition matrix
    bool feasible = false;
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    std::optional<double> threshold_coeff;
};

struct LambdaBounds {
    double lo = 0.0;
    double hi = 0.0;
};

class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline Matrix condition_matrix(const SwitchingNetwork& net, std::size_t u, const PFamily& p, const Matrix& g,
                               const Matrix& gamma, const CouplingGains& k) {
    const std::size_t modes = net.mode_count();
    const std::size_t m = net.node_count();
    const std::size_t n = g.rows();
    if (u >= modes) throw std::out_of_range("condition_matrix: mode out of range");
    if (p.size() != modes) throw std::invalid_argument("condition_matrix: P family has wrong number of modes");
    for (const auto& d : p)
        if (d.size() != m) throw std::invalid_argument("condition_matrix: P(v) has wrong dimension");
    if (!g.square() || !gamma.square() || gamma.rows() != n)
        throw std::invalid_argument("condition_matrix: G and Gamma must be square with equal size");
    if (net.generator.rows() != modes || net.generator.cols() != modes)
        throw std::invalid_argument("condition_matrix: generator size does not match mode count");

    const GraphMode& mode = net.modes[u];
    const Matrix coupling = k.alpha * Matrix::identity(m) - k.c * mode.laplacian - (k.c * k.epsilon) * mode.pinning_matrix();
    const Matrix weighted = Matrix::diagonal(p[u]) * coupling;
    Matrix out = symmetric_part(kron(weighted, g * gamma));

    Matrix jump(m * n, m * n);
    for (std::size_t v = 0; v < modes; ++v) {
        const double q = net.generator(u, v);
        if (q == 0.0) continue;
        jump = jump + (0.5 * q) * kron(Matrix::diagonal(p[v]), g);
    }
    if (max_asymmetry(jump) > 1e-12 * std::max(1.0, frobenius_norm(jump)))
        throw InternalError("condition_matrix: generator term is not symmetric (is G symmetric?)");
    return out + jump;
}

/// lambda_lo = min_v lambda_min(P(v) (x) G), lambda_hi = max_v lambda_max(P(v) (x) G).
inline LambdaBounds lambda_bounds(const PFamily& p, const Matrix& g) {
    if (p.empty()) throw std::invalid_argument("lambda_bounds: empty P family");
    const auto ge = symmetric_eigenvalues(g);
    if (ge.empty() || ge.front() <= 0.0) throw std::domain_error("P or G not positive definite");
    LambdaBounds b{INFINITY, -INFINITY};
    for (const auto& d : p) {
        for (double pi : d) {
            if (!(pi > 0.0)) throw std::domain_error("P or G not positive definite");
            // Kronecker eigenvalues are pairwise products; both factors are positive.
            b.lo = std::min(b.lo, pi * ge.front());
            b.hi = std::max(b.hi, pi * ge.back());
        }
    }
    return b;
}

inline double max_admissible_delta(double beta, const LambdaBounds& b) { return 2.0 * beta * b.lo / b.hi; }

/// (beta*lambda_lo - delta*lambda_hi/2) / (sqrt(c) * lambda_hi)
inline double threshold_coefficient(double beta, double lambda_lo, double lambda_hi, double delta, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("threshold_coefficient: c must be positive");
    if (!(lambda_lo > 0.0) || lambda_hi < lambda_lo)
        throw std::invalid_argument("threshold_coefficient: need 0 < lambda_lo <= lambda_hi");
    const double limit = 2.0 * beta * lambda_lo / lambda_hi;
    if (!(delta > 0.0) || delta > limit * (1.0 + 1e-12))
        throw std::invalid_argument("delta must satisfy 0 < delta <= 2*beta*lambda_lo/lambda_hi = " +
                                    std::to_string(limit));
    return std::max(0.0, beta * lambda_lo - 0.5 * delta * lambda_hi) / (std::sqrt(c) * lambda_hi);
}

inline StabilityCertificate check_condition(const SwitchingNetwork& net, const PFamily& p, const Matrix& g,
                                            const Matrix& gamma, const CouplingGains& k, double tol = 1e-9) {
    if (tol < 0.0) throw std::invalid_argument("check_condition: tolerance must be nonnegative");
    StabilityCertificate cert;
    cert.feasible = true;
    for (std::size_t u = 0; u < net.mode_count(); ++u) {
        const double margin = lambda_max_sym(condition_matrix(net, u, p, g, gamma, k));
        cert.margins.push_back(margin);
        if (margin > tol) cert.feasible = false;
    }
    const auto b = lambda_bounds(p, g);
    cert.lambda_lo = b.lo;
    cert.lambda_hi = b.hi;
    return cert;
}

}  // namespace etpin
