#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "etpin/linalg.hpp"

namespace etpin {

/// f : R^n -> R^n written into `out`.
using VectorField = std::function<void(std::span<const double> x, std::span<double> out)>;

using DynamicsParams = std::map<std::string, double>;

struct NodeDynamics {
    std::string name;
    DynamicsParams parameters;
    std::size_t dimension = 0;
    VectorField field;
    // Jacobians of each linear region of a piecewise-linear field.
    std::vector<Matrix> jacobian_regions;
    double lipschitz = 0.0;
    double one_sided = 0.0;

    std::vector<double> operator()(std::span<const double> x) const {
        std::vector<double> out(dimension);
        field(x, out);
        return out;
    }
};

/// Parameters of the QUAD(G, alpha*Gamma, beta) condition.
struct QuadParams {
    Matrix G;
    Matrix Gamma;
    double alpha = 0.0;
    double beta = 0.0;
};

struct ChuaParams {
    double p = 9.78;
    double q = 14.97;
    double m0 = -1.31;
    double m1 = -0.75;
};

inline double chua_nonlinearity(const ChuaParams& c, double z1) {
    return c.m1 * z1 + 0.5 * (c.m0 - c.m1) * (std::abs(z1 + 1.0) - std::abs(z1 - 1.0));
}

inline std::array<double, 3> chua_field(const ChuaParams& c, const std::array<double, 3>& z) {
    return {c.p * (-z[0] + z[1] - chua_nonlinearity(c, z[0])), z[0] - z[1] + z[2], -c.q * z[1]};
}

struct ChuaJacobians {
    Matrix outer;  // |z1| > 1, slope m1
    Matrix inner;  // |z1| < 1, slope m0
};

inline ChuaJacobians chua_jacobians(const ChuaParams& c) {
    auto with_slope = [&](double slope) {
        return Matrix{{c.p * (-1.0 - slope), c.p, 0.0}, {1.0, -1.0, 1.0}, {0.0, -c.q, 0.0}};
    };
    return {with_slope(c.m1), with_slope(c.m0)};
}

struct QuadEstimate {
    double beta = 0.0;
    std::optional<std::string> warning;
};

/// beta = alpha - max over regions of lambda_max((A + A^T)/2), valid for G = Gamma = I.
inline QuadEstimate estimate_quad_beta(double alpha, std::span<const Matrix> regions) {
    if (regions.empty()) throw std::invalid_argument("estimate_quad_beta: no Jacobian regions");
    double worst = -INFINITY;
    for (const auto& a : regions) worst = std::max(worst, lambda_max_sym(symmetric_part(a)));
    QuadEstimate est{alpha - worst, std::nullopt};
    if (!(est.beta > 0.0)) est.warning = "QUAD margin nonpositive; the decay guarantee does not apply";
    return est;
}

/// Largest spectral norm over regions; a Lipschitz constant for continuous piecewise-linear f.
inline double estimate_lipschitz(std::span<const Matrix> regions) {
    if (regions.empty()) throw std::invalid_argument("estimate_lipschitz: no Jacobian regions");
    double best = 0.0;
    for (const auto& a : regions) best = std::max(best, spectral_norm(a));
    return best;
}

/// Smallest eigenvalue of the symmetric part over regions:
/// (u-v)^T (f(u)-f(v)) >= sigma |u-v|^2.
inline double estimate_one_sided(std::span<const Matrix> regions) {
    if (regions.empty()) throw std::invalid_argument("estimate_one_sided: no Jacobian regions");
    double worst = INFINITY;
    for (const auto& a : regions) worst = std::min(worst, lambda_min_sym(symmetric_part(a)));
    return worst;
}

inline void finish_constants(NodeDynamics& dyn) {
    dyn.lipschitz = estimate_lipschitz(dyn.jacobian_regions);
    dyn.one_sided = estimate_one_sided(dyn.jacobian_regions);
}

inline NodeDynamics make_chua(const ChuaParams& params) {
    NodeDynamics dyn;
    dyn.name = "chua";
    dyn.dimension = 3;
    dyn.field = [params](std::span<const double> x, std::span<double> out) {
        const double g = chua_nonlinearity(params, x[0]);
        out[0] = params.p * (-x[0] + x[1] - g);
        out[1] = x[0] - x[1] + x[2];
        out[2] = -params.q * x[1];
    };
    const auto jac = chua_jacobians(params);
    dyn.jacobian_regions = {jac.outer, jac.inner};
    finish_constants(dyn);
    return dyn;
}

/// f(x) = A x.
inline NodeDynamics make_linear(const Matrix& a) {
    if (!a.square() || a.rows() == 0) throw std::invalid_argument("make_linear: matrix must be square");
    NodeDynamics dyn;
    dyn.name = "linear";
    dyn.dimension = a.rows();
    dyn.field = [a](std::span<const double> x, std::span<double> out) {
        for (std::size_t i = 0; i < a.rows(); ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
            out[i] = s;
        }
    };
    dyn.jacobian_regions = {a};
    finish_constants(dyn);
    return dyn;
}

/// Built-in dynamics by name:
///   chua   - p, q, m0, m1
///   linear - f(x) = -rate * x in `dim` dimensions (rate defaults to 1, dim to 3)
inline NodeDynamics make_dynamics(const std::string& name, const DynamicsParams& params) {
    auto get = [&](const char* key, double fallback) {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    auto reject_unknown = [&](std::initializer_list<const char*> known) {
        for (const auto& [key, _] : params) {
            bool ok = false;
            for (const char* k : known) ok = ok || key == k;
            if (!ok) throw std::invalid_argument("dynamics '" + name + "' has no parameter '" + key + "'");
        }
    };
    if (name == "chua") {
        reject_unknown({"p", "q", "m0", "m1"});
        ChuaParams def;
        const ChuaParams c{get("p", def.p), get("q", def.q), get("m0", def.m0), get("m1", def.m1)};
        auto dyn = make_chua(c);
        dyn.parameters = {{"p", c.p}, {"q", c.q}, {"m0", c.m0}, {"m1", c.m1}};
        return dyn;
    }
    if (name == "linear") {
        reject_unknown({"rate", "dim"});
        const double dim = get("dim", 3.0);
        if (dim < 1.0 || dim != std::floor(dim)) throw std::invalid_argument("linear dynamics: dim must be a positive integer");
        const double rate = get("rate", 1.0);
        auto dyn = make_linear(-rate * Matrix::identity(static_cast<std::size_t>(dim)));
        dyn.parameters = {{"rate", rate}, {"dim", dim}};
        return dyn;
    }
    throw std::invalid_argument("unknown dynamics '" + name + "' (known: chua, linear)");
}

}  // namespace etpin
