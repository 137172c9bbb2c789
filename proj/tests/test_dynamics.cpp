#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "epsense/dynamics.hpp"
#include "epsense/eigensolver.hpp"
#include "epsense/errors.hpp"
#include "support/oracles.hpp"

using namespace epsense;

namespace {

SystemParams paper_literal() {
    SystemParams p;
    p.omega_m = 1e5;
    p.kappa = 1e7;
    p.g0 = 50.0;
    p.J = 1e5;
    p.delta = 1e5;
    p.gamma1 = 0.0;
    p.gamma2 = 0.0;
    return p;
}

SystemParams random_params(std::mt19937_64& rng) {
    SystemParams p = paper_literal();
    p.omega_m = oracles::log_uniform(rng, 1e3, 1e7);
    p.kappa = oracles::log_uniform(rng, 1e5, 1e9);
    p.g0 = oracles::log_uniform(rng, 1.0, 1e3);
    p.delta = (rng() % 2 ? 1.0 : -1.0) * oracles::log_uniform(rng, 1e2, 1e7);
    p.n_cav = oracles::log_uniform(rng, 1.0, 1e12);
    return p;
}

}  // namespace

TEST_CASE("optical spring shift: zero drive and zero detuning") {
    SystemParams p = paper_literal();
    p.n_cav = 0.0;
    CHECK(optical_spring_shift(p) == 0.0);

    p.n_cav = 3.7e9;
    p.delta = 0.0;
    CHECK(optical_spring_shift(p) == 0.0);  // the two terms cancel oddly
}

TEST_CASE("optical spring shift: exact reference value") {
    // 2*2500*1e10 * [0 + 2e5/(2.5e13 + 4e10)] = 1e19 / 2.504e13 = 125000000/313
    SystemParams p = paper_literal();
    p.n_cav = 1e10;
    CHECK(optical_spring_shift(p) ==
          doctest::Approx(399361.02236421726).epsilon(1e-13));
}

TEST_CASE("optical damping: zero drive, zero detuning, reference value") {
    SystemParams p = paper_literal();
    p.n_cav = 0.0;
    CHECK(optical_damping(p) == 0.0);

    p.n_cav = 1e10;
    p.delta = 0.0;
    CHECK(optical_damping(p) == 0.0);

    p.delta = p.omega_m;
    // 2500*1e10*1e7 * [-1/2.5e13 + 1/2.504e13] = -5000000/313
    CHECK(optical_damping(p) == doctest::Approx(-15974.44089456869).epsilon(1e-13));
    CHECK(optical_damping(p) < 0.0);  // anti-damping at this detuning sign
}

TEST_CASE("optical response is linear in photon number") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        SystemParams p = random_params(rng);
        SystemParams p2 = p.with_n_cav(2.0 * p.n_cav);
        CHECK(optical_spring_shift(p2) == 2.0 * optical_spring_shift(p));
        CHECK(optical_damping(p2) == 2.0 * optical_damping(p));

        SystemParams p10 = p.with_n_cav(10.0 * p.n_cav);
        CHECK(optical_spring_shift(p10) ==
              doctest::Approx(10.0 * optical_spring_shift(p)).epsilon(1e-13));
        CHECK(optical_damping(p10) ==
              doctest::Approx(10.0 * optical_damping(p)).epsilon(1e-13));
    }
}

TEST_CASE("optical response is odd in the detuning") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 100; ++i) {
        SystemParams p = random_params(rng);
        SystemParams m = p;
        m.delta = -p.delta;
        CHECK(optical_spring_shift(m) == -optical_spring_shift(p));
        CHECK(optical_damping(m) == -optical_damping(p));
    }
}

TEST_CASE("effective params: undriven lossless pair") {
    SystemParams p = paper_literal();
    p.n_cav = 0.0;
    const EffectiveParams e = effective_params(p);
    CHECK(e.omega_eff == p.omega_m);
    CHECK(e.gamma_eff == 0.0);
    CHECK(e.J == p.J);
    CHECK(e.n_cav == 0.0);
}

TEST_CASE("effective params: scales with photon number") {
    SystemParams p = paper_literal();
    p.n_cav = 2.3e9;
    const EffectiveParams a = effective_params(p);
    const EffectiveParams b = effective_params(p.with_n_cav(10.0 * p.n_cav));
    CHECK(b.omega_eff - p.omega_m ==
          doctest::Approx(10.0 * (a.omega_eff - p.omega_m)).epsilon(1e-13));
    CHECK(b.gamma_eff == doctest::Approx(10.0 * a.gamma_eff).epsilon(1e-13));
}

TEST_CASE("effective params: rejects unbalanced intrinsic damping") {
    SystemParams p = paper_literal();
    p.n_cav = 1e10;  // gamma_eff ~ 1.6e4
    p.gamma2 = 1.0;  // far above the 1e-6 relative allowance
    CHECK_THROWS_WITH_AS(effective_params(p),
                         doctest::Contains("imbalance"), validation_error);

    p.gamma2 = 1e-4;  // 6e-9 relative: inside the allowance
    const EffectiveParams e = effective_params(p);
    CHECK(e.gamma_eff == doctest::Approx(15974.44089456869 + 1e-4).epsilon(1e-12));

    p.gamma2 = 0.0;
    p.gamma1 = 1.0;
    CHECK_THROWS_AS(effective_params(p), validation_error);
}

TEST_CASE("effective params: gain side flag propagates") {
    SystemParams p = paper_literal();
    p.n_cav = 1e10;
    CHECK(effective_params(p).gain_sign == +1);
    p.gain_on_first = false;
    CHECK(effective_params(p).gain_sign == -1);
}

TEST_CASE("system params validation names the field") {
    SystemParams p = paper_literal();
    p.omega_m = -1.0;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("system.omega_m"),
                         validation_error);
    p = paper_literal();
    p.n_cav = -2.0;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("system.n_cav"),
                         validation_error);
}

TEST_CASE("heff: structure, zero trace, block-diagonal limit") {
    EffectiveParams e{1.7e5, 3.3e4, 9.1e3, 1e9, +1};
    const Matrix4c m = build_heff(e);

    CHECK(m[0 * 4 + 1] == complexd(0.0, e.omega_eff));
    CHECK(m[1 * 4 + 0] == complexd(0.0, -e.omega_eff));
    CHECK(m[1 * 4 + 1] == complexd(0.0, e.gamma_eff));
    CHECK(m[1 * 4 + 2] == complexd(0.0, e.J));
    CHECK(m[3 * 4 + 0] == complexd(0.0, e.J));
    CHECK(m[3 * 4 + 3] == complexd(0.0, -e.gamma_eff));
    CHECK(m[0] + m[5] + m[10] + m[15] == complexd(0.0, 0.0));

    // uncoupled lossless pair: only the +/- omega_eff rotations remain
    EffectiveParams lossless{1.7e5, 0.0, 0.0, 0.0, +1};
    const Matrix4c b = build_heff(lossless);
    CHECK(b[1 * 4 + 1] == complexd(0.0, 0.0));
    CHECK(b[1 * 4 + 2] == complexd(0.0, 0.0));
    CHECK(b[3 * 4 + 0] == complexd(0.0, 0.0));
}

TEST_CASE("closed form: lossless uncoupled degeneracy") {
    EffectiveParams e{2.5e5, 0.0, 0.0, 0.0, +1};
    const ModeBranches b = eigen_closed_form(e);
    CHECK(b.omega_plus.real() == doctest::Approx(2.5e5).epsilon(1e-14));
    CHECK(b.omega_minus.real() == doctest::Approx(2.5e5).epsilon(1e-14));
    CHECK(b.omega_plus.imag() == 0.0);
    CHECK(b.omega_minus.imag() == 0.0);
}

TEST_CASE("closed form: gamma = J collapse") {
    // inner radicand collapses to (g^2/2)^2 exactly, so
    // omega_plus = omega_eff and omega_minus = sqrt(omega_eff^2 - g^2)
    std::mt19937_64 rng(13);
    for (int i = 0; i < 50; ++i) {
        const double w = oracles::log_uniform(rng, 1e2, 1e8);
        const double g = w * oracles::log_uniform(rng, 1e-4, 0.5);
        EffectiveParams e{w, g, g, 0.0, +1};
        CHECK(ep_discriminant(e) == doctest::Approx(0.25 * g * g * g * g).epsilon(1e-14));
        const ModeBranches b = eigen_closed_form(e);
        CHECK(b.omega_plus.real() == doctest::Approx(w).epsilon(1e-13));
        CHECK(b.omega_minus.real() ==
              doctest::Approx(std::sqrt(w * w - g * g)).epsilon(1e-13));
        CHECK(splitting(e) ==
              doctest::Approx(w - std::sqrt(w * w - g * g)).epsilon(1e-10));
    }
}

TEST_CASE("characteristic polynomial matches the closed-form quartic") {
    // (l^2 - omega_plus^2)(l^2 - omega_minus^2) expanded numerically
    // against Faddeev-LeVerrier coefficients of the matrix.
    std::mt19937_64 rng(14);
    for (int i = 0; i < 200; ++i) {
        const double w = oracles::log_uniform(rng, 1e2, 1e8);
        const double g = oracles::log_uniform(rng, 1e2, 1e8);
        const double J = oracles::log_uniform(rng, 1e2, 1e8);

        const double s = std::max({w, g, J});
        EffectiveParams es{w / s, g / s, J / s, 0.0, +1};

        const auto coeffs = characteristic_polynomial(build_heff(es));
        const ModeBranches b = eigen_closed_form(es);
        const auto expect = oracles::quartic_from_squares(
            b.omega_plus * b.omega_plus, b.omega_minus * b.omega_minus);

        CHECK(std::abs(coeffs[0] - expect[0]) < 1e-12);
        CHECK(std::abs(coeffs[1] - expect[1]) < 1e-10 * std::abs(expect[1]) + 1e-12);
        CHECK(std::abs(coeffs[2] - expect[2]) < 1e-12);
        CHECK(std::abs(coeffs[3] - expect[3]) < 1e-10 * std::abs(expect[3]) + 1e-12);

        // and against the direct algebraic expansion
        const double w2 = es.omega_eff * es.omega_eff;
        const complexd c2 = -(2.0 * w2 - es.gamma_eff * es.gamma_eff);
        const complexd c0 = w2 * (w2 - es.J * es.J);
        CHECK(std::abs(coeffs[1] - c2) < 1e-10 * std::abs(c2) + 1e-12);
        CHECK(std::abs(coeffs[3] - c0) < 1e-10 * std::abs(c0) + 1e-12);
    }
}

TEST_CASE("splitting: degenerate and broken-phase behavior") {
    EffectiveParams degenerate{1e5, 0.0, 0.0, 0.0, +1};
    CHECK(splitting(degenerate) == 0.0);

    // well past the critical gain: real parts coalesce, imaginary split
    EffectiveParams broken{1e5, 5e4, 1e3, 0.0, +1};
    CHECK(ep_discriminant(broken) < 0.0);
    CHECK(splitting(broken) <= 1e-9 * broken.omega_eff);
    const ModeBranches b = eigen_closed_form(broken);
    CHECK(b.omega_plus.imag() > 0.0);
    CHECK(b.omega_plus.imag() ==
          doctest::Approx(-b.omega_minus.imag()).epsilon(1e-10));
}

TEST_CASE("branch ordering convention") {
    const ModeBranches a = ModeBranches::ordered({1.0, 0.0}, {2.0, 0.0});
    CHECK(a.omega_plus == complexd(2.0, 0.0));
    const ModeBranches b = ModeBranches::ordered({1.0, -3.0}, {1.0, 4.0});
    CHECK(b.omega_plus == complexd(1.0, 4.0));
}

TEST_CASE("closed form survives extreme scale separation") {
    // the small square is recovered from the product form; a direct
    // evaluation would lose it to cancellation
    EffectiveParams e{1e2, 1e8, 1e3, 0.0, +1};
    const ModeBranches b = eigen_closed_form(e);
    const complexd small = b.omega_plus * b.omega_minus;
    // product of all four eigenvalues = w^2 (w^2 - J^2) => product of the
    // two squares; check the pair product against it
    const double expect = e.omega_eff * e.omega_eff *
                          (e.omega_eff * e.omega_eff - e.J * e.J);
    CHECK(std::abs(small * small - complexd(expect, 0.0)) <=
          1e-12 * std::abs(expect));
}
