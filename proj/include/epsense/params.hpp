#pragma once

#include <string>

namespace epsense {

/// How frequency-like config numbers are interpreted.
///
/// paper_literal: numbers are used exactly as given (mixed Hz / rad/s
/// conventions found in the literature are reproduced verbatim).
/// angular: frequency-like inputs are read as Hz and converted to rad/s
/// (multiplied by 2*pi) on ingestion. All internal math is agnostic: it
/// only assumes one consistent unit throughout.
enum class UnitMode { paper_literal, angular };

std::string to_string(UnitMode m);
UnitMode unit_mode_from_string(const std::string& s);

/// Full physical configuration of the coupled optomechanical pair plus
/// the test-mass constants used by the metrology chain.
///
/// All rates/frequencies share one unit (see UnitMode); masses are kg.
struct SystemParams {
    double omega_m = 1e5;   // mechanical resonance frequency
    double kappa = 1e7;     // cavity intensity decay rate
    double g0 = 50.0;       // single-photon optomechanical coupling
    double J = 1e5;         // mechanical coupling rate
    double delta = 1e5;     // cavity-drive detuning
    double gamma1 = 0.0;    // intrinsic damping, resonator 1
    double gamma2 = 0.0;    // intrinsic damping, resonator 2
    double n_cav = 0.0;     // intracavity photon number (dimensionless)
    double m_t = 1.55e-10;  // test mass [kg]
    double Q = 1.2e7;       // mechanical quality factor

    // Drive-to-resonator mapping: which resonator carries the optical
    // gain. The magnitude is the same either way; flipping it swaps the
    // signs in the effective dynamics.
    bool gain_on_first = true;

    UnitMode unit_mode = UnitMode::paper_literal;

    /// Throws validation_error naming the offending field.
    void validate() const;

    SystemParams with_n_cav(double n) const;
    SystemParams with_omega_m(double w) const;
};

}  // namespace epsense
