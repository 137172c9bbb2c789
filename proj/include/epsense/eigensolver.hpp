#pragma once

#include <array>

#include "epsense/dynamics.hpp"

namespace epsense {

/// Monic characteristic polynomial of a 4x4 complex matrix by the
/// Faddeev-LeVerrier recursion. Returned as {c3, c2, c1, c0} for
/// l^4 + c3 l^3 + c2 l^2 + c1 l + c0.
std::array<complexd, 4> characteristic_polynomial(const Matrix4c& m);

/// All four roots of a monic quartic by simultaneous (Durand-Kerner)
/// iteration followed by Newton polishing. Roots are returned unordered;
/// convergence is bounded by max_sweeps.
std::array<complexd, 4> quartic_roots(const std::array<complexd, 4>& coeffs,
                                      int max_sweeps = 256);

/// Determinant via LU with partial pivoting.
complexd det4(const Matrix4c& m);

/// Self-contained eigensolver for 4x4 complex matrices (characteristic
/// quartic + root finding; no delegation to the closed-form path). Each
/// eigenvalue satisfies |det(m - l I)| <= 1e-8 * ||m||_F^4 in scaled
/// units, else numerical_error. Results sorted by real part descending,
/// ties by imaginary part descending.
std::array<complexd, 4> eigen_numeric(const Matrix4c& m, int max_sweeps = 256);

}  // namespace epsense
