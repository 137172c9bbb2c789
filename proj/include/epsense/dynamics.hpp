#pragma once

#include <array>
#include <complex>

#include "epsense/params.hpp"

namespace epsense {

using complexd = std::complex<double>;

/// Row-major 4x4 complex matrix acting on the quadrature vector
/// (q1, p1, q2, p2).
using Matrix4c = std::array<complexd, 16>;

/// Radiation-pressure modification of the mechanical mode.
/// Gamma > 0 adds damping; Gamma < 0 is anti-damping (gain).
struct OpticalResponse {
    double delta_omega = 0.0;  // optical spring shift
    double Gamma = 0.0;        // optically induced damping
};

/// Reduced description of the balanced gain/loss pair: one effective
/// frequency, one gain/loss rate (>= 0, assigned +gamma_eff to the gain
/// resonator and -gamma_eff to the lossy one), the mechanical coupling,
/// and the photon number that produced the triple.
struct EffectiveParams {
    double omega_eff = 0.0;
    double gamma_eff = 0.0;
    double J = 0.0;
    double n_cav = 0.0;
    int gain_sign = +1;  // +1: resonator 1 gains; -1: swapped
};

/// Paired supermode eigenfrequencies. Static label convention: real part
/// descending, ties broken by imaginary part descending. Parameter sweeps
/// re-pair by continuity instead (see sweep_branches).
struct ModeBranches {
    complexd omega_plus;
    complexd omega_minus;

    static ModeBranches ordered(complexd a, complexd b);
};

double optical_spring_shift(const SystemParams& p);
double optical_damping(const SystemParams& p);
OpticalResponse optical_response(const SystemParams& p);

/// Maps drive parameters to the effective gain/loss triple. Rejects
/// configurations whose intrinsic dampings break the gain/loss balance
/// by more than 1e-6 relative (the residual is reported).
EffectiveParams effective_params(const SystemParams& p);

/// Effective non-Hermitian Hamiltonian of the balanced pair.
Matrix4c build_heff(const EffectiveParams& e);

/// Closed-form supermode pair
///   omega_{+,-}^2 = w^2 - g^2/2 +/- sqrt((g^2/2)^2 + w^2 (J^2 - g^2))
/// evaluated on the principal complex branch. The smaller-magnitude
/// square is recovered from the exact product w^2 (w^2 - J^2) to avoid
/// cancellation when the two squares differ by many orders of magnitude.
ModeBranches eigen_closed_form(const EffectiveParams& e);

/// Re(omega_plus) - Re(omega_minus) >= 0 under the static ordering.
double splitting(const EffectiveParams& e);

/// Inner radicand (g^2/2)^2 + w^2 (J^2 - g^2). Negative in the broken
/// phase; its root over a parameter axis locates the exceptional point.
double ep_discriminant(const EffectiveParams& e);

}  // namespace epsense
