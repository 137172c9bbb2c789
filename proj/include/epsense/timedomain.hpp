#pragma once

#include <array>
#include <vector>

#include "epsense/dynamics.hpp"

namespace epsense {

using State4 = std::array<double, 4>;  // (q1, p1, q2, p2)

struct Trajectory {
    std::vector<double> times;   // uniform grid
    std::vector<State4> states;  // one row per time
    EffectiveParams e;
    bool truncated = false;  // hit the overflow guard (expected when the
                             // broken-phase growth outruns the time span)
};

/// Direct integration of the balanced gain/loss equations of motion
/// (embedded Dormand-Prince 5(4) pair, local relative tolerance rel_tol,
/// output resampled on the uniform dt_out grid). dt_out must resolve the
/// fastest supermode with at least 20 samples per period. States whose
/// norm exceeds 1e15 x the initial norm truncate the trajectory and set
/// the flag instead of overflowing.
Trajectory integrate_eom(const EffectiveParams& e, const State4& initial_state,
                         double t_span, double dt_out, double rel_tol = 1e-10);

struct SpectrumPeak {
    double omega = 0.0;      // angular frequency of the refined peak
    double magnitude = 0.0;  // windowed spectral magnitude (relative)
};

struct SpectrumEstimate {
    std::vector<SpectrumPeak> peaks;  // strongest first
    double rate = 0.0;        // exponential envelope rate (log-RMS slope)
    double resolution = 0.0;  // Fourier bound 2*pi / T_data
    bool resolved_pair = false;  // two peaks separated by >= resolution
};

/// Windowed periodogram (Hann, zero-padded, parabolic peak interpolation)
/// plus log-envelope regression on the chosen component. Peaks closer
/// than the resolution bound are reported as a single peak with
/// resolved_pair = false rather than split artificially. If
/// min_separation > 0 the trajectory must be long enough to resolve it.
SpectrumEstimate extract_spectrum(const Trajectory& traj, int component = 0,
                                  double min_separation = 0.0);

}  // namespace epsense
