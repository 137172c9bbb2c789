#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "epsense/eigensolver.hpp"
#include "epsense/errors.hpp"
#include "support/oracles.hpp"

using namespace epsense;

TEST_CASE("identity-scaled matrix gives a fourfold eigenvalue") {
    const complexd c(3.7e4, -1.2e3);
    Matrix4c m{};
    m[0] = m[5] = m[10] = m[15] = c;
    const auto ev = eigen_numeric(m);
    // a fourfold root is maximally ill-conditioned for any polynomial
    // method: expect ~eps^(1/4) scatter around it
    for (const auto& v : ev) CHECK(std::abs(v - c) <= 1e-3 * std::abs(c));
}

TEST_CASE("diagonal matrix returns the diagonal") {
    Matrix4c m{};
    m[0] = complexd(4.0, 0.0);
    m[5] = complexd(-1.0, 2.0);
    m[10] = complexd(0.25, 0.0);
    m[15] = complexd(0.0, -3.0);
    const auto ev = eigen_numeric(m);
    const std::array<complexd, 4> expect{m[0], m[5], m[10], m[15]};
    CHECK(oracles::best_match_distance(
              {ev[0], ev[1], ev[2], ev[3]},
              {expect[0], expect[1], expect[2], expect[3]}) <= 1e-12 * 4.0);
}

TEST_CASE("heff eigenvalues come in +/- pairs matching the closed form") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 200; ++i) {
        const double w = oracles::log_uniform(rng, 1e2, 1e8);
        const double g = oracles::log_uniform(rng, 1e2, 1e8);
        const double J = oracles::log_uniform(rng, 1e2, 1e8);
        EffectiveParams e{w, g, J, 0.0, +1};

        const ModeBranches b = eigen_closed_form(e);
        const std::array<complexd, 4> closed{b.omega_plus, -b.omega_plus,
                                             b.omega_minus, -b.omega_minus};
        const auto ev = eigen_numeric(build_heff(e));

        double scale = 0.0;
        for (const auto& v : closed) scale = std::max(scale, std::abs(v));
        const double d = oracles::best_match_distance(
            {ev[0], ev[1], ev[2], ev[3]}, closed);
        CHECK(d <= 1e-9 * scale);
    }
}

TEST_CASE("quartic roots: exact factored polynomial") {
    // (z-1)(z-2)(z-3)(z-4) = z^4 - 10z^3 + 35z^2 - 50z + 24
    const auto roots = quartic_roots({complexd(-10.0), complexd(35.0),
                                      complexd(-50.0), complexd(24.0)});
    const double d = oracles::best_match_distance(
        roots, {complexd(1.0), complexd(2.0), complexd(3.0), complexd(4.0)});
    CHECK(d <= 1e-12);
}

TEST_CASE("residual gate: one sweep is not enough for a generic matrix") {
    std::mt19937_64 rng(22);
    Matrix4c m;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& v : m) v = complexd(u(rng), u(rng));
    CHECK_THROWS_AS(eigen_numeric(m, 1), numerical_error);
    CHECK_NOTHROW(eigen_numeric(m));
}

TEST_CASE("non-finite entries are rejected") {
    Matrix4c m{};
    m[3] = complexd(std::numeric_limits<double>::quiet_NaN(), 0.0);
    CHECK_THROWS_AS(eigen_numeric(m), validation_error);
}

TEST_CASE("zero matrix short-circuits") {
    Matrix4c m{};
    for (const auto& v : eigen_numeric(m)) CHECK(v == complexd{});
}

TEST_CASE("det4 matches a known determinant") {
    // block triangular check: det = product of 2x2 block determinants
    Matrix4c m{};
    m[0] = {2, 0};  m[1] = {1, 0};
    m[4] = {0, 0};  m[5] = {3, 0};
    m[10] = {1, 1}; m[11] = {4, 0};
    m[14] = {0, 0}; m[15] = {1, -1};
    // upper-left 2x2 diag block: det 6; lower-right: (1+i)(1-i) = 2
    CHECK(std::abs(det4(m) - complexd(12.0, 0.0)) <= 1e-14 * 12.0);
}
