#include "epsense/metrology.hpp"

#include <cmath>

#include "epsense/errors.hpp"

namespace epsense {

namespace {

void require_pos(double v, const char* name) {
    if (!(std::isfinite(v) && v > 0.0))
        throw validation_error(std::string(name) + " must be > 0 and finite (got " +
                               detail::num_str(v) + ")");
}

}  // namespace

double freq_shift_from_gradient(double m_t, double omega_m, double dF_dr) {
    require_pos(m_t, "m_t");
    require_pos(omega_m, "omega_m");
    return -dF_dr / (2.0 * m_t * omega_m);
}

double linewidth(double omega_n, double Q) {
    require_pos(Q, "Q");
    return omega_n / Q;
}

DetectionFloor detection_floor(double sigma, double Y, double m_t, double omega_m,
                               double r_char) {
    require_pos(sigma, "sigma");
    require_pos(Y, "Y");
    require_pos(m_t, "m_t");
    require_pos(omega_m, "omega_m");
    require_pos(r_char, "r_char");
    DetectionFloor f;
    f.sigma = sigma;
    f.dw_min = sigma * sigma / Y;  // dD = sigma under the sqrt law
    f.grad_min = 2.0 * m_t * omega_m * f.dw_min;
    f.f_min = f.grad_min * r_char;
    f.r_char = r_char;
    return f;
}

LinearFloor floor_without_ep(double sigma, double m_t, double omega_m) {
    if (!(std::isfinite(sigma) && sigma >= 0.0))
        throw validation_error("sigma must be >= 0 and finite");
    require_pos(m_t, "m_t");
    require_pos(omega_m, "omega_m");
    return {sigma, 2.0 * m_t * omega_m * sigma};
}

}  // namespace epsense
