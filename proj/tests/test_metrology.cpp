#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "epsense/errors.hpp"
#include "epsense/metrology.hpp"

using namespace epsense;

TEST_CASE("frequency shift from a force gradient") {
    CHECK(freq_shift_from_gradient(1.55e-10, 1e5, 0.0) == 0.0);
    // 3.1e-14 / (2 * 1.55e-10 * 1e5) = 1e-9 exactly
    CHECK(freq_shift_from_gradient(1.55e-10, 1e5, -3.1e-14) ==
          doctest::Approx(1e-9).epsilon(1e-14));
    // inverting at the 1e-9 shift floor lands at the 1e-14 N/m scale
    const double grad = 2.0 * 1.55e-10 * 1e5 * 1.378e-9;
    CHECK(grad == doctest::Approx(4.27e-14).epsilon(1e-2));
    CHECK_THROWS_AS(freq_shift_from_gradient(0.0, 1e5, 1.0), validation_error);
}

TEST_CASE("linewidth") {
    // 1e5 / 1.2e7 = 1/120 = 8.333...e-3 (quoted as 8.3 mHz)
    CHECK(linewidth(1e5, 1.2e7) == 1e5 / 1.2e7);
    CHECK(linewidth(1e5, 1.2e7) == doctest::Approx(8.3e-3).epsilon(5e-3));
    CHECK(linewidth(1e5, 1e300) <= 1e-294);            // Q -> inf limit
    CHECK(linewidth(1e5, 2.4e7) == 0.5 * linewidth(1e5, 1.2e7));
    CHECK_THROWS_AS(linewidth(1e5, 0.0), validation_error);
}

TEST_CASE("detection floor: reference chain") {
    const DetectionFloor f = detection_floor(8.3e-3, 5e4, 1.55e-10, 1e5, 3.75e-7);
    CHECK(f.dw_min == doctest::Approx(1.3778e-9).epsilon(1e-10));
    CHECK(f.grad_min == doctest::Approx(4.27118e-14).epsilon(1e-10));
    CHECK(f.f_min == doctest::Approx(1.6016925e-20).epsilon(1e-10));
    CHECK(f.sigma == 8.3e-3);
    CHECK(f.r_char == 3.75e-7);
}

TEST_CASE("floor without the sqrt law") {
    const LinearFloor f = floor_without_ep(8.3e-3, 1.55e-10, 1e5);
    CHECK(f.dw_min == 8.3e-3);
    CHECK(f.grad_min == doctest::Approx(2.0 * 1.55e-10 * 1e5 * 8.3e-3).epsilon(1e-14));

    // ratio of the two floors is sigma/Y
    const DetectionFloor ep = detection_floor(8.3e-3, 5e4, 1.55e-10, 1e5, 3.75e-7);
    CHECK(ep.dw_min / f.dw_min == doctest::Approx(8.3e-3 / 5e4).epsilon(1e-12));

    const LinearFloor zero = floor_without_ep(0.0, 1.55e-10, 1e5);
    CHECK(zero.dw_min == 0.0);
    CHECK(zero.grad_min == 0.0);
}

TEST_CASE("chain consistency: three expressions for the enhancement agree") {
    for (double sigma : {8.3e-3, 1e-2, 4.2}) {
        for (double Y : {5e4, 1.9e5, 7.0}) {
            const DetectionFloor f = detection_floor(sigma, Y, 1.55e-10, 1e5, 3.75e-7);
            const double via_sqrt = std::sqrt(Y / f.dw_min);
            const double via_ratio = sigma / f.dw_min;
            const double via_y = Y / sigma;
            CHECK(via_sqrt == doctest::Approx(via_y).epsilon(1e-12));
            CHECK(via_ratio == doctest::Approx(via_y).epsilon(1e-12));
        }
    }
}

TEST_CASE("the sqrt-law floor wins exactly when sigma < Y") {
    const DetectionFloor better = detection_floor(1e-2, 1e3, 1.55e-10, 1e5, 3.75e-7);
    CHECK(better.dw_min < 1e-2);
    const DetectionFloor worse = detection_floor(1e3, 1e-2, 1.55e-10, 1e5, 3.75e-7);
    CHECK(worse.dw_min > 1e3);
}

TEST_CASE("floor scalings") {
    const DetectionFloor base = detection_floor(8.3e-3, 5e4, 1.55e-10, 1e5, 3.75e-7);
    CHECK(detection_floor(8.3e-3, 5e4, 2.0 * 1.55e-10, 1e5, 3.75e-7).grad_min ==
          doctest::Approx(2.0 * base.grad_min).epsilon(1e-13));
    CHECK(detection_floor(8.3e-3, 5e4, 1.55e-10, 2e5, 3.75e-7).grad_min ==
          doctest::Approx(2.0 * base.grad_min).epsilon(1e-13));
    CHECK(detection_floor(2.0 * 8.3e-3, 5e4, 1.55e-10, 1e5, 3.75e-7).grad_min ==
          doctest::Approx(4.0 * base.grad_min).epsilon(1e-13));
}
