#pragma once

#include <functional>
#include <vector>

#include "epsense/dynamics.hpp"

namespace epsense {

/// Branch data over a photon-number grid. Branch labels are assigned by
/// continuity (nearest-neighbor pairing against the previous grid point),
/// so re_plus/im_plus follow one physical branch through the exceptional
/// point instead of being re-sorted there.
struct SweepResult {
    std::vector<double> n_values;
    std::vector<ModeBranches> branches;
    std::vector<double> re_plus, re_minus, im_plus, im_minus;
    std::vector<char> valid;  // 0 where effective_params rejected the point
};

struct EpResult {
    double n0 = 0.0;            // photon number at the exceptional point
    double omega_eff_ep = 0.0;  // effective parameters there
    double gamma_eff_ep = 0.0;
    double residual = 0.0;      // discriminant value at n0
};

struct ResponsePoint {
    double dw = 0.0;  // perturbation magnitude
    double dD = 0.0;  // splitting released at the operating point
};

/// The before/after splitting-vs-n view for one perturbation.
struct SplittingCurves {
    double dw = 0.0;
    std::vector<double> n_values;
    std::vector<double> d_before, d_after;
};

/// Square-root response law dD = sqrt(Y dw) fitted over a window.
struct SqrtFit {
    double Y = 0.0;
    double window_lo = 0.0, window_hi = 0.0;
    double exponent = 0.0;      // unconstrained log-log slope (diagnostic)
    double rms_residual = 0.0;  // rms relative residual of the sqrt model
};

using EffectiveMap = std::function<EffectiveParams(double)>;

SweepResult sweep_branches(const SystemParams& p, const std::vector<double>& n_grid);

/// Root of the discriminant over the photon-number axis, bracketed by
/// [n_lo, n_hi] (Brent; converges to relative width rel_tol). The map
/// form lets callers supply a synthetic n -> EffectiveParams relation.
EpResult find_ep(const EffectiveMap& map, double n_lo, double n_hi,
                 double rel_tol = 1e-12);
EpResult find_ep(const SystemParams& p, double n_lo, double n_hi,
                 double rel_tol = 1e-12);

/// Splitting released by a mechanical-frequency perturbation at fixed
/// photon number n0. An attractive force gradient softens the resonance,
/// so a perturbation of magnitude dw enters as omega_m -> omega_m - dw
/// (the direction that releases the degeneracy); the optical response is
/// re-derived at the shifted frequency. Returns dD(dw) per grid point.
std::vector<ResponsePoint> splitting_response(const SystemParams& p, double n0,
                                              const std::vector<double>& dw_grid);

SplittingCurves splitting_curves(const SystemParams& p,
                                 const std::vector<double>& n_grid, double dw);

/// Y from least squares of dD^2 against dw through the origin; the
/// unconstrained log-log slope and the rms relative residual are reported
/// alongside so a window extending past the small-perturbation regime
/// shows up in the diagnostics rather than being absorbed.
SqrtFit fit_sqrt_law(const std::vector<ResponsePoint>& response);

/// sqrt(Y / dw): gain of the sqrt-law response over a linear one.
double enhancement_factor(double Y, double dw);

}  // namespace epsense
