#include <catch2/catch_amalgamated.hpp>

#include "etpin/trajectory_bounds.hpp"
#include "fixtures.hpp"

using namespace etpin;
using Catch::Approx;

TEST_CASE("rho closed form", "[bounds]") {
    CHECK(rho_lipschitz(0.0, 3.0, 2.0, 5.0) == 0.0);
    for (double t : {0.1, 1.0, 5.0}) CHECK(rho_lipschitz(t, 0.0, 0.0, 17.9) == 0.0);
    CHECK(rho_lipschitz(std::log(2.0), 1.0, 0.0, 1.0) == Approx(1.0).epsilon(1e-14));
    // L -> 0 limit
    CHECK(rho_lipschitz(2.0, 1.5, 9.0, 0.0) == Approx(3.0));
    CHECK(rho_lipschitz(2.0, 1.5, 0.0, 1e-9) == Approx(3.0).epsilon(1e-6));
    CHECK_THROWS_AS(rho_lipschitz(-1.0, 1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("varrho closed form", "[bounds]") {
    CHECK(varrho_one_sided(0.0, 4.0, 2.5, -3.0, 6.0) == Approx(2.5));
    for (double t : {0.0, 0.3, 2.0}) CHECK(varrho_one_sided(t, 0.0, 0.0, -9.8, 19.7) == 0.0);
    CHECK(varrho_one_sided(1.0, 0.0, 1.0, 0.0, 1.0) == Approx(std::exp(-0.5)).epsilon(1e-14));
    // 2 sigma - mu = 0: second term becomes (g^2/mu) t
    CHECK(varrho_one_sided(0.5, 1.0, 1.0, 0.5, 1.0) == Approx(std::sqrt(1.0 - 0.5)).epsilon(1e-14));
    // clamped at zero once the expression turns negative
    CHECK(varrho_one_sided(10.0, 5.0, 0.1, -1.0, 2.0) == 0.0);
    CHECK_THROWS_AS(varrho_one_sided(1.0, 1.0, 1.0, 0.0, 0.0), std::invalid_argument);
    CHECK(default_mu(-9.86) == Approx(19.72));
    CHECK(default_mu(2.0) == 1.0);
}

TEST_CASE("rho is nondecreasing, varrho nonincreasing in the input gap", "[bounds][property]") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int k = 0; k < 2000; ++k) {
        const double t = u(rng), g = u(rng), d = u(rng), l = 10.0 * u(rng);
        const double h = 0.01 + u(rng);
        const double r = rho_lipschitz(t, g, d, l);
        CHECK(rho_lipschitz(t + h, g, d, l) >= r);
        CHECK(rho_lipschitz(t, g + h, d, l) >= r);
        CHECK(rho_lipschitz(t, g, d + h, l) >= r);
        const double sigma = -5.0 * u(rng), mu = default_mu(sigma);
        CHECK(varrho_one_sided(t, g + h, d, sigma, mu) <= varrho_one_sided(t, g, d, sigma, mu));
    }
}

TEST_CASE("paired integration oracle", "[bounds]") {
    const auto lin = make_dynamics("linear", {{"rate", 1.0}, {"dim", 2.0}});
    const std::vector<double> zero{0, 0}, u0{1, 0}, v0{0, 2};
    const auto same = paired_integration_oracle(lin, u0, u0, u0, u0, 1.0, 1e-3);
    CHECK(same.deviation == 0.0);
    CHECK(same.distance == 0.0);
    const auto at0 = paired_integration_oracle(lin, zero, zero, u0, v0, 0.0, 1e-3);
    CHECK(at0.deviation == 0.0);
    CHECK(at0.distance == Approx(std::sqrt(5.0)));
    // f = -x: distance = e^{-t} |u0 - v0| up to O(dt); the Euler recurrence gives (1 - dt)^k exactly
    const auto r = paired_integration_oracle(lin, zero, zero, u0, v0, 1.0, 1e-4);
    CHECK(r.distance == Approx(std::pow(1.0 - 1e-4, 10000) * std::sqrt(5.0)).epsilon(1e-10));
    CHECK(r.distance == Approx(std::exp(-1.0) * std::sqrt(5.0)).epsilon(1e-3));
    CHECK_THROWS_AS(paired_integration_oracle(lin, zero, zero, u0, v0, 1.0, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(paired_integration_oracle(lin, zero, zero, u0, v0, 1.0, 0.0), std::invalid_argument);

    const auto blow = make_dynamics("linear", {{"rate", -1e300}, {"dim", 1.0}});
    const std::vector<double> one{1.0}, z1{0.0};
    CHECK_THROWS_AS(paired_integration_oracle(blow, z1, z1, one, z1, 0.01, 1e-3), IntegrationBlowUp);
}

TEST_CASE("bounds hold on random chua pairs", "[bounds][property]") {
    const auto dyn = make_chua(ChuaParams{});
    const BoundConstants bc{dyn.lipschitz, dyn.one_sided, default_mu(dyn.one_sided)};
    SoundnessOptions opt;
    opt.trials = 200;
    opt.seed = 31;
    const auto rows = sample_bound_soundness(dyn, bc, opt);
    REQUIRE(rows.size() == 600);
    for (const auto& r : rows) {
        CHECK(r.rho_ok(1e-6));
        CHECK(r.varrho_ok(1e-6));
    }
}
