#include "epsense/params.hpp"

#include <cmath>
#include <cstdio>

#include "epsense/errors.hpp"

namespace epsense {

namespace detail {

std::string num_str(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

std::string to_string(UnitMode m) {
    return m == UnitMode::paper_literal ? "paper-literal" : "angular";
}

UnitMode unit_mode_from_string(const std::string& s) {
    if (s == "paper-literal") return UnitMode::paper_literal;
    if (s == "angular") return UnitMode::angular;
    throw validation_error("unit_mode: expected 'paper-literal' or 'angular', got '" + s + "'");
}

namespace {

void require(bool ok, const char* field, double value, const char* what) {
    if (!ok)
        throw validation_error(std::string("system.") + field + ": " + what +
                               " (got " + detail::num_str(value) + ")");
}

}  // namespace

void SystemParams::validate() const {
    require(std::isfinite(omega_m) && omega_m > 0, "omega_m", omega_m, "must be > 0 and finite");
    require(std::isfinite(kappa) && kappa > 0, "kappa", kappa, "must be > 0 and finite");
    require(std::isfinite(g0), "g0", g0, "must be finite");
    require(std::isfinite(J) && J >= 0, "J", J, "must be >= 0 and finite");
    require(std::isfinite(delta), "delta", delta, "must be finite");
    require(std::isfinite(gamma1) && gamma1 >= 0, "gamma1", gamma1, "must be >= 0 and finite");
    require(std::isfinite(gamma2) && gamma2 >= 0, "gamma2", gamma2, "must be >= 0 and finite");
    require(std::isfinite(n_cav) && n_cav >= 0, "n_cav", n_cav, "must be >= 0 and finite");
    require(std::isfinite(m_t) && m_t > 0, "m_t", m_t, "must be > 0 and finite");
    require(std::isfinite(Q) && Q > 0, "Q", Q, "must be > 0 and finite");
}

SystemParams SystemParams::with_n_cav(double n) const {
    SystemParams q = *this;
    q.n_cav = n;
    return q;
}

SystemParams SystemParams::with_omega_m(double w) const {
    SystemParams q = *this;
    q.omega_m = w;
    return q;
}

}  // namespace epsense
