#pragma once

namespace epsense {

/// Measurement floor of the sqrt-law sensor: linewidth-limited frequency
/// resolution translated into force-gradient and force scales.
struct DetectionFloor {
    double sigma = 0.0;     // spectral linewidth (FWHM)
    double dw_min = 0.0;    // minimum resolvable frequency shift, sigma^2/Y
    double grad_min = 0.0;  // 2 m_t omega_m dw_min [N/m]
    double f_min = 0.0;     // grad_min * r_char [N]
    double r_char = 0.0;    // characteristic separation used for f_min [m]
};

/// Linear-sensor floor for the same linewidth.
struct LinearFloor {
    double dw_min = 0.0;
    double grad_min = 0.0;
};

/// dw = -dF_dr / (2 m_t omega_m); sign preserved (dF_dr > 0 softens the
/// resonance, dF_dr < 0 hardens it).
double freq_shift_from_gradient(double m_t, double omega_m, double dF_dr);

/// FWHM resolution limit omega_n / Q.
double linewidth(double omega_n, double Q);

DetectionFloor detection_floor(double sigma, double Y, double m_t,
                               double omega_m, double r_char);

LinearFloor floor_without_ep(double sigma, double m_t, double omega_m);

}  // namespace epsense
