// Test-side oracles kept independent of the library code paths they check.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <random>

namespace oracles {

using complexd = std::complex<double>;
using Mat4 = std::array<double, 16>;
using State4 = std::array<double, 4>;

inline Mat4 matmul(const Mat4& a, const Mat4& b) {
    Mat4 c{};
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k)
            for (int j = 0; j < 4; ++j) c[i * 4 + j] += a[i * 4 + k] * b[k * 4 + j];
    return c;
}

/// exp(m) by scaling and squaring with a Taylor series on the scaled
/// matrix; independent of any integrator.
inline Mat4 expm(const Mat4& m) {
    double norm = 0.0;
    for (int i = 0; i < 4; ++i) {
        double row = 0.0;
        for (int j = 0; j < 4; ++j) row += std::abs(m[i * 4 + j]);
        norm = std::max(norm, row);
    }
    int squarings = 0;
    double scale = 1.0;
    while (norm * scale > 0.5) {
        scale *= 0.5;
        ++squarings;
    }

    Mat4 a{};
    for (int i = 0; i < 16; ++i) a[i] = m[i] * scale;

    Mat4 result{};
    result[0] = result[5] = result[10] = result[15] = 1.0;
    Mat4 term = result;
    for (int k = 1; k <= 24; ++k) {
        term = matmul(term, a);
        for (int i = 0; i < 16; ++i) term[i] /= k;
        for (int i = 0; i < 16; ++i) result[i] += term[i];
        double tmax = 0.0;
        for (double v : term) tmax = std::max(tmax, std::abs(v));
        if (tmax < 1e-20) break;
    }
    for (int s = 0; s < squarings; ++s) result = matmul(result, result);
    return result;
}

inline State4 apply(const Mat4& m, const State4& y) {
    State4 r{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r[i] += m[i * 4 + j] * y[j];
    return r;
}

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

/// Best-permutation match of two 4-element complex sets; returns the
/// largest pairwise distance under the best assignment.
inline double best_match_distance(std::array<complexd, 4> a, std::array<complexd, 4> b) {
    std::array<int, 4> idx{0, 1, 2, 3};
    double best = std::numeric_limits<double>::infinity();
    std::sort(idx.begin(), idx.end());
    do {
        double worst = 0.0;
        for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(a[i] - b[idx[i]]));
        best = std::min(best, worst);
    } while (std::next_permutation(idx.begin(), idx.end()));
    return best;
}

/// Numeric expansion of (l^2 - s1)(l^2 - s2) into monic quartic
/// coefficients {c3, c2, c1, c0}.
inline std::array<complexd, 4> quartic_from_squares(complexd s1, complexd s2) {
    return {complexd{0.0}, -(s1 + s2), complexd{0.0}, s1 * s2};
}

}  // namespace oracles
