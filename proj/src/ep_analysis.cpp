#include "epsense/ep_analysis.hpp"

#include <cmath>
#include <limits>

#include "epsense/errors.hpp"

namespace epsense {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Brent root finder; fa, fb must straddle zero.
double brent(const std::function<double(double)>& f, double a, double b,
             double fa, double fb, double rel_tol) {
    double c = a, fc = fa;
    double d = b - a, e = b - a;
    for (int iter = 0; iter < 200; ++iter) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) +
                            0.5 * rel_tol * std::abs(b);
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    return b;
}

}  // namespace

SweepResult sweep_branches(const SystemParams& p, const std::vector<double>& n_grid) {
    p.validate();
    if (n_grid.empty()) throw validation_error("sweep_branches: empty n grid");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (!(std::isfinite(n_grid[i]) && n_grid[i] >= 0.0))
            throw validation_error("sweep_branches: n grid must be nonnegative and finite");
        if (i > 0 && !(n_grid[i] > n_grid[i - 1]))
            throw validation_error("sweep_branches: n grid must be strictly increasing");
    }

    SweepResult out;
    out.n_values = n_grid;
    out.branches.reserve(n_grid.size());
    bool have_prev = false;
    complexd prev_p, prev_m;

    for (double n : n_grid) {
        EffectiveParams e;
        try {
            e = effective_params(p.with_n_cav(n));
        } catch (const validation_error&) {
            out.branches.push_back({complexd(kNaN, kNaN), complexd(kNaN, kNaN)});
            out.re_plus.push_back(kNaN);
            out.re_minus.push_back(kNaN);
            out.im_plus.push_back(kNaN);
            out.im_minus.push_back(kNaN);
            out.valid.push_back(0);
            continue;
        }
        const ModeBranches mb = eigen_closed_form(e);
        complexd x = mb.omega_plus, y = mb.omega_minus;
        if (have_prev) {
            const double keep = std::abs(x - prev_p) + std::abs(y - prev_m);
            const double swap = std::abs(y - prev_p) + std::abs(x - prev_m);
            if (swap < keep) std::swap(x, y);
        }
        out.branches.push_back({x, y});
        out.re_plus.push_back(x.real());
        out.re_minus.push_back(y.real());
        out.im_plus.push_back(x.imag());
        out.im_minus.push_back(y.imag());
        out.valid.push_back(1);
        prev_p = x;
        prev_m = y;
        have_prev = true;
    }
    return out;
}

EpResult find_ep(const EffectiveMap& map, double n_lo, double n_hi, double rel_tol) {
    if (!(std::isfinite(n_lo) && std::isfinite(n_hi) && n_lo >= 0.0 && n_hi > n_lo))
        throw validation_error("find_ep: bracket must satisfy 0 <= n_lo < n_hi");
    if (!(rel_tol > 0.0)) throw validation_error("find_ep: rel_tol must be > 0");

    auto disc = [&map](double n) { return ep_discriminant(map(n)); };
    const double f_lo = disc(n_lo);
    const double f_hi = disc(n_hi);

    double root;
    if (f_lo == 0.0) {
        root = n_lo;
    } else if (f_hi == 0.0) {
        root = n_hi;
    } else if ((f_lo > 0.0) == (f_hi > 0.0)) {
        throw numerical_error("find_ep: no EP in range [" + detail::num_str(n_lo) + ", " +
                              detail::num_str(n_hi) +
                              "]: discriminant does not change sign");
    } else {
        root = brent(disc, n_lo, n_hi, f_lo, f_hi, rel_tol);
    }

    const EffectiveParams e = map(root);
    return {root, e.omega_eff, e.gamma_eff, ep_discriminant(e)};
}

EpResult find_ep(const SystemParams& p, double n_lo, double n_hi, double rel_tol) {
    p.validate();
    return find_ep([&p](double n) { return effective_params(p.with_n_cav(n)); },
                   n_lo, n_hi, rel_tol);
}

std::vector<ResponsePoint> splitting_response(const SystemParams& p, double n0,
                                              const std::vector<double>& dw_grid) {
    p.validate();
    if (!(std::isfinite(n0) && n0 >= 0.0))
        throw validation_error("splitting_response: n0 must be >= 0 and finite");
    for (double dw : dw_grid)
        if (!(std::isfinite(dw) && dw >= 0.0))
            throw validation_error("splitting_response: dw grid must be nonnegative and finite");

    const double d0 = splitting(effective_params(p.with_n_cav(n0)));
    std::vector<ResponsePoint> out;
    out.reserve(dw_grid.size());
    for (double dw : dw_grid) {
        const SystemParams q = p.with_omega_m(p.omega_m - dw).with_n_cav(n0);
        out.push_back({dw, splitting(effective_params(q)) - d0});
    }
    return out;
}

SplittingCurves splitting_curves(const SystemParams& p,
                                 const std::vector<double>& n_grid, double dw) {
    if (!(std::isfinite(dw) && dw >= 0.0))
        throw validation_error("splitting_curves: dw must be >= 0 and finite");
    SplittingCurves out;
    out.dw = dw;
    out.n_values = n_grid;
    const SweepResult before = sweep_branches(p, n_grid);
    const SweepResult after = sweep_branches(p.with_omega_m(p.omega_m - dw), n_grid);
    out.d_before.reserve(n_grid.size());
    out.d_after.reserve(n_grid.size());
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        out.d_before.push_back(before.valid[i]
                                   ? std::abs(before.re_plus[i] - before.re_minus[i])
                                   : kNaN);
        out.d_after.push_back(after.valid[i]
                                  ? std::abs(after.re_plus[i] - after.re_minus[i])
                                  : kNaN);
    }
    return out;
}

SqrtFit fit_sqrt_law(const std::vector<ResponsePoint>& response) {
    if (response.size() < 8)
        throw validation_error("fit_sqrt_law: need at least 8 response points, got " +
                               std::to_string(response.size()));
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const ResponsePoint& r : response) {
        if (!(std::isfinite(r.dw) && r.dw > 0.0))
            throw validation_error("fit_sqrt_law: perturbations must be positive and finite");
        lo = std::min(lo, r.dw);
        hi = std::max(hi, r.dw);
        if (!(r.dD > 0.0))
            throw numerical_error(
                "fit_sqrt_law: nonpositive response dD = " + detail::num_str(r.dD) +
                " at dw = " + detail::num_str(r.dw) +
                " (window extends past the sqrt-law validity range)");
    }
    if (!(hi / lo >= 100.0 * (1.0 - 1e-12)))
        throw validation_error("fit_sqrt_law: window must span at least two decades (got " +
                               detail::num_str(hi / lo) + "x)");

    double sxy = 0.0, sxx = 0.0;
    for (const ResponsePoint& r : response) {
        sxy += r.dD * r.dD * r.dw;
        sxx += r.dw * r.dw;
    }
    const double Y = sxy / sxx;

    // Unconstrained log-log slope as an exponent diagnostic.
    const double n = static_cast<double>(response.size());
    double sl = 0.0, sd = 0.0, sll = 0.0, sld = 0.0;
    for (const ResponsePoint& r : response) {
        const double lx = std::log(r.dw);
        const double ly = std::log(r.dD);
        sl += lx;
        sd += ly;
        sll += lx * lx;
        sld += lx * ly;
    }
    const double exponent = (n * sld - sl * sd) / (n * sll - sl * sl);

    double ss = 0.0;
    for (const ResponsePoint& r : response) {
        const double rel = (r.dD - std::sqrt(Y * r.dw)) / r.dD;
        ss += rel * rel;
    }

    return {Y, lo, hi, exponent, std::sqrt(ss / n)};
}

double enhancement_factor(double Y, double dw) {
    if (!(std::isfinite(Y) && Y > 0.0))
        throw validation_error("enhancement_factor: Y must be > 0 and finite");
    if (!(std::isfinite(dw) && dw > 0.0))
        throw validation_error("enhancement_factor: dw must be > 0 and finite");
    return std::sqrt(Y / dw);
}

}  // namespace epsense
