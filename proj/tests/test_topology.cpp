#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "etpin/linalg.hpp"
#include "etpin/net_topology.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace etpin;
using Catch::Approx;

namespace {

bool contains(const std::vector<std::string>& diag, const std::string& needle) {
    for (const auto& d : diag)
        if (d.find(needle) != std::string::npos) return true;
    return false;
}

Matrix random_symmetric(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = u(rng);
    return a;
}

std::vector<Edge> random_edges(std::mt19937_64& rng, std::size_t m, double p) {
    std::bernoulli_distribution keep(p);
    std::vector<Edge> e;
    for (std::size_t i = 1; i <= m; ++i)
        for (std::size_t j = i + 1; j <= m; ++j)
            if (keep(rng)) e.emplace_back(i, j);
    return e;
}

}  // namespace

TEST_CASE("jacobi eigenvalues match the characteristic polynomial", "[linalg]") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 200; ++k) {
        const std::size_t n = 1 + k % 6;
        const auto a = random_symmetric(rng, n);
        auto jac = symmetric_eigenvalues(a);
        auto ref = oracle::eigenvalues(a);
        std::sort(ref.begin(), ref.end());
        REQUIRE(jac.size() == n);
        for (std::size_t i = 0; i < n; ++i) CHECK(jac[i] == Approx(ref[i]).margin(1e-8));
    }
}

TEST_CASE("jacobi handles diagonal, repeated and 2x2 spectra", "[linalg]") {
    CHECK(symmetric_eigenvalues(Matrix{{3, 0}, {0, -1}}) == std::vector<double>{-1, 3});
    const auto rep = symmetric_eigenvalues(Matrix::identity(4));
    for (double v : rep) CHECK(v == Approx(1.0));
    const auto two = symmetric_eigenvalues(Matrix{{-20, 20}, {20, -10}});
    CHECK(two[1] == Approx((-30.0 + std::sqrt(1700.0)) / 2.0).epsilon(1e-12));
    CHECK(two[0] == Approx((-30.0 - std::sqrt(1700.0)) / 2.0).epsilon(1e-12));
    CHECK_THROWS_AS(symmetric_eigenvalues(Matrix{{1, 2}, {0, 1}}), std::invalid_argument);
}

TEST_CASE("kron and spectral norm", "[linalg]") {
    const Matrix a{{1, 2}, {3, 4}};
    const auto k = kron(a, Matrix::identity(2));
    CHECK(k(0, 2) == 2.0);
    CHECK(k(3, 1) == 3.0);
    CHECK(k(1, 0) == 0.0);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int t = 0; t < 50; ++t) {
        Matrix b(3, 3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) b(i, j) = u(rng);
        CHECK(spectral_norm(b) == Approx(oracle::spectral_norm(b)).epsilon(1e-9));
    }
}

TEST_CASE("laplacian from edges", "[topology]") {
    CHECK(laplacian_from_edges({}, 2) == Matrix{{0, 0}, {0, 0}});
    const std::vector<Edge> one{{1, 2}};
    CHECK(laplacian_from_edges(one, 2) == Matrix{{1, -1}, {-1, 1}});
    const std::vector<Edge> path{{1, 2}, {2, 3}};
    CHECK(laplacian_from_edges(path, 3) == Matrix{{1, -1, 0}, {-1, 2, -1}, {0, -1, 1}});
}

TEST_CASE("laplacian construction rejects bad edges", "[topology]") {
    const std::vector<Edge> out_of_range{{1, 3}};
    const std::vector<Edge> zero{{0, 1}};
    const std::vector<Edge> loop{{2, 2}};
    const std::vector<Edge> dup{{1, 2}, {2, 1}};
    CHECK_THROWS_WITH(laplacian_from_edges(out_of_range, 2), Catch::Matchers::ContainsSubstring("outside 1..2"));
    CHECK_THROWS_AS(laplacian_from_edges(zero, 2), std::invalid_argument);
    CHECK_THROWS_WITH(laplacian_from_edges(loop, 2), Catch::Matchers::ContainsSubstring("self-loop"));
    CHECK_THROWS_WITH(laplacian_from_edges(dup, 2), Catch::Matchers::ContainsSubstring("duplicate edge (1,2)"));
    const std::vector<Edge> fine{{1, 2}};
    const std::vector<std::size_t> pins{3};
    CHECK_THROWS_AS(GraphMode::from_edges(fine, 2, pins), std::invalid_argument);
}

TEST_CASE("random laplacians: zero row sums, symmetry, zero smallest eigenvalue", "[topology][property]") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        const std::size_t m = 2 + t % 7;
        const auto e = random_edges(rng, m, 0.4);
        const auto lap = laplacian_from_edges(e, m);
        for (std::size_t i = 0; i < m; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                s += lap(i, j);
                CHECK(lap(i, j) == lap(j, i));
            }
            CHECK(s == 0.0);
        }
        CHECK(std::abs(symmetric_eigenvalues(lap).front()) < 1e-10);
    }
}

TEST_CASE("benchmark network validates", "[topology]") {
    const auto cfg = fx::benchmark();
    CHECK(validate_network(cfg.network).empty());
    CHECK(cfg.network.mode_count() == 4);
    CHECK(cfg.network.node_count() == 10);
    CHECK(cfg.network.generator == fx::bench_generator());
    CHECK(cfg.network.modes[0].pinned == std::vector<std::size_t>{1, 5});
    CHECK(cfg.network.modes[1].pinned == std::vector<std::size_t>{4, 7});
    CHECK(cfg.network.modes[2].pinned == std::vector<std::size_t>{1, 5});
    CHECK(cfg.network.modes[3].pinned == std::vector<std::size_t>{1, 4});
}

TEST_CASE("validate_network reports every violation", "[topology]") {
    auto net = fx::single_mode({{1, 2}, {2, 3}}, 3, {1});
    net.generator = Matrix{{-1, 1.1}, {1, -1}};
    net.modes.push_back(net.modes.front());
    net.modes[1].laplacian(0, 1) = -2.0;
    const auto diag = validate_network(net);
    CHECK(contains(diag, "generator row 1 sums to 0.1"));
    CHECK(contains(diag, "laplacian entry (1,2) is -2, expected 0 or -1"));
    CHECK(contains(diag, "not symmetric"));
    CHECK(diag.size() >= 4);

    SwitchingNetwork bad_q = fx::single_mode({{1, 2}}, 2, {});
    bad_q.generator = Matrix{{1}};
    const auto d2 = validate_network(bad_q);
    CHECK(contains(d2, "diagonal 1 is positive"));
    CHECK(contains(d2, "generator row 1 sums to 1"));
}
