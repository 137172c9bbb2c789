#include "epsense/eigensolver.hpp"

#include <algorithm>
#include <cmath>

#include "epsense/errors.hpp"

namespace epsense {

namespace {

void add_diag(Matrix4c& m, complexd v) {
    m[0] += v;
    m[5] += v;
    m[10] += v;
    m[15] += v;
}

complexd eval_poly(const std::array<complexd, 4>& c, complexd z) {
    return (((z + c[0]) * z + c[1]) * z + c[2]) * z + c[3];
}

complexd eval_dpoly(const std::array<complexd, 4>& c, complexd z) {
    return ((4.0 * z + 3.0 * c[0]) * z + 2.0 * c[1]) * z + c[2];
}

}  // namespace

std::array<complexd, 4> characteristic_polynomial(const Matrix4c& m) {
    // Faddeev-LeVerrier: M_{k+1} = A (M_k + c_k I), c_{k+1} = -tr(M_{k+1})/(k+1).
    // Run in extended precision: the low-order coefficients suffer pure
    // cancellation when the +/- eigenvalue pairs differ by many orders of
    // magnitude, and their absolute error maps straight onto the small
    // eigenvalues.
    using complexl = std::complex<long double>;
    std::array<complexl, 16> a;
    for (int i = 0; i < 16; ++i)
        a[i] = complexl(m[i].real(), m[i].imag());

    auto matmul_l = [](const std::array<complexl, 16>& x,
                       const std::array<complexl, 16>& y) {
        std::array<complexl, 16> r{};
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k) {
                const complexl xik = x[i * 4 + k];
                for (int j = 0; j < 4; ++j) r[i * 4 + j] += xik * y[k * 4 + j];
            }
        return r;
    };
    auto trace_l = [](const std::array<complexl, 16>& x) {
        return x[0] + x[5] + x[10] + x[15];
    };

    std::array<complexl, 4> c{};
    std::array<complexl, 16> mk = a;
    c[0] = -trace_l(mk);
    for (int k = 1; k < 4; ++k) {
        mk[0] += c[k - 1];
        mk[5] += c[k - 1];
        mk[10] += c[k - 1];
        mk[15] += c[k - 1];
        mk = matmul_l(a, mk);
        c[k] = -trace_l(mk) / static_cast<long double>(k + 1);
    }

    std::array<complexd, 4> out;
    for (int k = 0; k < 4; ++k)
        out[k] = complexd(static_cast<double>(c[k].real()),
                          static_cast<double>(c[k].imag()));
    return out;
}

complexd det4(const Matrix4c& m) {
    Matrix4c a = m;
    complexd det = 1.0;
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        double best = std::abs(a[col * 4 + col]);
        for (int r = col + 1; r < 4; ++r) {
            const double v = std::abs(a[r * 4 + col]);
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        if (best == 0.0) return complexd{};
        if (pivot != col) {
            for (int j = 0; j < 4; ++j) std::swap(a[pivot * 4 + j], a[col * 4 + j]);
            det = -det;
        }
        det *= a[col * 4 + col];
        for (int r = col + 1; r < 4; ++r) {
            const complexd f = a[r * 4 + col] / a[col * 4 + col];
            if (f == complexd{}) continue;
            for (int j = col; j < 4; ++j) a[r * 4 + j] -= f * a[col * 4 + j];
        }
    }
    return det;
}

std::array<complexd, 4> quartic_roots(const std::array<complexd, 4>& coeffs,
                                      int max_sweeps) {
    // Starting circle: Fujiwara-style root bound.
    double radius = 0.0;
    for (int k = 0; k < 4; ++k)
        radius = std::max(radius, std::pow(std::abs(coeffs[k]), 1.0 / (k + 1)));
    radius = 2.0 * radius + 1e-3;

    const complexd seed(0.4, 0.9);  // avoids symmetry lock-in
    std::array<complexd, 4> z;
    complexd s = seed;
    for (int i = 0; i < 4; ++i) {
        z[i] = radius * s;
        s *= seed;
    }

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double max_step = 0.0;
        for (int i = 0; i < 4; ++i) {
            complexd denom = 1.0;
            for (int j = 0; j < 4; ++j)
                if (j != i) denom *= z[i] - z[j];
            if (denom == complexd{}) {
                z[i] += radius * 1e-6 * seed;  // split coincident iterates
                max_step = radius;
                continue;
            }
            const complexd step = eval_poly(coeffs, z[i]) / denom;
            z[i] -= step;
            max_step = std::max(max_step, std::abs(step) / (1.0 + std::abs(z[i])));
        }
        if (max_step < 5e-16) break;
    }

    // Newton polish against the same polynomial.
    for (int i = 0; i < 4; ++i) {
        for (int it = 0; it < 3; ++it) {
            const complexd d = eval_dpoly(coeffs, z[i]);
            if (std::abs(d) == 0.0) break;
            const complexd step = eval_poly(coeffs, z[i]) / d;
            if (!(std::abs(step) < 0.5 * (1.0 + std::abs(z[i])))) break;
            z[i] -= step;
        }
    }
    return z;
}

std::array<complexd, 4> eigen_numeric(const Matrix4c& m, int max_sweeps) {
    double scale = 0.0;
    for (const complexd& v : m) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw validation_error("eigen_numeric: matrix entries must be finite");
        scale = std::max(scale, std::abs(v));
    }
    if (scale == 0.0) return {complexd{}, complexd{}, complexd{}, complexd{}};

    Matrix4c ms;
    for (int i = 0; i < 16; ++i) ms[i] = m[i] / scale;

    auto roots = quartic_roots(characteristic_polynomial(ms), max_sweeps);

    double frob2 = 0.0;
    for (const complexd& v : ms) frob2 += std::norm(v);
    const double bound = 1e-8 * frob2 * frob2;  // 1e-8 ||ms||_F^4

    for (const complexd& r : roots) {
        Matrix4c shifted = ms;
        add_diag(shifted, -r);
        if (!(std::abs(det4(shifted)) <= bound))
            throw numerical_error(
                "eigen_numeric: no convergence after " + std::to_string(max_sweeps) +
                " sweeps (eigenvalue residual above tolerance)");
    }

    std::sort(roots.begin(), roots.end(), [](complexd a, complexd b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    for (complexd& r : roots) r *= scale;
    return roots;
}

}  // namespace epsense
