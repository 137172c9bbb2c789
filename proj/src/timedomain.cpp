#include "epsense/timedomain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "epsense/errors.hpp"

namespace epsense {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Real 4x4 generator of d/dt (q1,p1,q2,p2) for the balanced pair.
std::array<double, 16> motion_matrix(const EffectiveParams& e) {
    const double w = e.omega_eff;
    const double g = e.gain_sign * e.gamma_eff;
    const double J = e.J;
    return {0, w, 0, 0,
            -w, g, J, 0,
            0, 0, 0, w,
            J, 0, -w, -g};
}

State4 apply(const std::array<double, 16>& m, const State4& y) {
    State4 r{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r[i] += m[i * 4 + j] * y[j];
    return r;
}

double max_abs(const State4& y) {
    double m = 0.0;
    for (double v : y) m = std::max(m, std::abs(v));
    return m;
}

// Dormand-Prince 5(4) tableau
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
// dense-output weights (4th-order continuous extension)
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

}  // namespace

Trajectory integrate_eom(const EffectiveParams& e, const State4& initial_state,
                         double t_span, double dt_out, double rel_tol) {
    if (!(std::isfinite(t_span) && t_span > 0.0))
        throw validation_error("integrate_eom: t_span must be > 0");
    if (!(std::isfinite(dt_out) && dt_out > 0.0))
        throw validation_error("integrate_eom: dt_out must be > 0");
    if (!(rel_tol > 0.0 && rel_tol < 1e-2))
        throw validation_error("integrate_eom: rel_tol must be in (0, 1e-2)");
    for (double v : initial_state)
        if (!std::isfinite(v))
            throw validation_error("integrate_eom: initial state must be finite");

    const ModeBranches mb = eigen_closed_form(e);
    const double w_max = std::max(std::abs(mb.omega_plus), std::abs(mb.omega_minus));
    if (w_max > 0.0 && dt_out > kTwoPi / (20.0 * w_max) * (1.0 + 1e-12))
        throw validation_error(
            "integrate_eom: dt_out = " + detail::num_str(dt_out) +
            " does not resolve the fastest supermode with >= 20 samples/period "
            "(need <= " + detail::num_str(kTwoPi / (20.0 * w_max)) + ")");

    const auto m = motion_matrix(e);
    auto rhs = [&m](const State4& y) { return apply(m, y); };

    const std::size_t n_out = static_cast<std::size_t>(std::floor(t_span / dt_out)) + 1;
    Trajectory traj;
    traj.e = e;
    traj.times.reserve(n_out);
    traj.states.reserve(n_out);

    State4 y = initial_state;
    traj.times.push_back(0.0);
    traj.states.push_back(y);
    std::size_t next_out = 1;

    const double norm0 = std::max(max_abs(initial_state), 1e-300);
    const double guard = 1e15 * norm0;
    const double atol = rel_tol * norm0;

    double h = (w_max > 0.0) ? 1e-2 * kTwoPi / w_max : dt_out;
    double t = 0.0;
    State4 k1 = rhs(y);  // FSAL

    while (next_out < n_out) {
        const double hs = std::min(h, t_span - t);

        State4 k2, k3, k4, k5, k6, k7, yt, ynew;
        for (int i = 0; i < 4; ++i) yt[i] = y[i] + hs * a21 * k1[i];
        k2 = rhs(yt);
        for (int i = 0; i < 4; ++i) yt[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
        k3 = rhs(yt);
        for (int i = 0; i < 4; ++i)
            yt[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        k4 = rhs(yt);
        for (int i = 0; i < 4; ++i)
            yt[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        k5 = rhs(yt);
        for (int i = 0; i < 4; ++i)
            yt[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                 a65 * k5[i]);
        k6 = rhs(yt);
        for (int i = 0; i < 4; ++i)
            ynew[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                   b6 * k6[i]);
        k7 = rhs(ynew);

        double err = 0.0;
        for (int i = 0; i < 4; ++i) {
            const double ei = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                    e6 * k6[i] + e7 * k7[i]);
            const double sc = atol + rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += (ei / sc) * (ei / sc);
        }
        err = std::sqrt(err / 4.0);

        if (err <= 1.0) {
            // continuous extension over the accepted step, emitted at
            // every output time inside it
            State4 r2, r3, r4, r5;
            for (int i = 0; i < 4; ++i) {
                const double dy = ynew[i] - y[i];
                r2[i] = dy;
                r3[i] = hs * k1[i] - dy;
                r4[i] = dy - hs * k7[i] - r3[i];
                r5[i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                              d6 * k6[i] + d7 * k7[i]);
            }
            const double t_new = t + hs;
            while (next_out < n_out) {
                const double t_target = static_cast<double>(next_out) * dt_out;
                if (t_target > t_new + 1e-9 * dt_out) break;
                const double th = std::clamp((t_target - t) / hs, 0.0, 1.0);
                State4 s;
                for (int i = 0; i < 4; ++i)
                    s[i] = y[i] + th * (r2[i] + (1.0 - th) *
                                                    (r3[i] + th * (r4[i] + (1.0 - th) * r5[i])));
                traj.times.push_back(t_target);
                traj.states.push_back(s);
                ++next_out;
            }
            t = t_new;
            y = ynew;
            k1 = k7;
            if (max_abs(y) > guard) {
                traj.truncated = true;
                return traj;
            }
        }
        const double factor =
            (err > 0.0) ? std::clamp(0.7 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
        h = hs * factor;
        if (!(h > 0.0) || !std::isfinite(h)) break;
    }
    return traj;
}

namespace {

void fft_inplace(std::vector<complexd>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -kTwoPi / static_cast<double>(len);
        const complexd wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            complexd w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const complexd u = a[i + k];
                const complexd v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

}  // namespace

SpectrumEstimate extract_spectrum(const Trajectory& traj, int component,
                                  double min_separation) {
    if (component < 0 || component > 3)
        throw validation_error("extract_spectrum: component must be in [0, 3]");
    const std::size_t n = traj.times.size();
    if (n < 16) throw validation_error("extract_spectrum: trajectory too short");
    const double dt = traj.times[1] - traj.times[0];
    const double t_data = dt * static_cast<double>(n);

    SpectrumEstimate est;
    est.resolution = kTwoPi / t_data;
    if (min_separation > 0.0 && est.resolution > min_separation)
        throw validation_error(
            "extract_spectrum: trajectory span resolves " + detail::num_str(est.resolution) +
            " but " + detail::num_str(min_separation) + " was requested");

    // Hann-windowed, zero-padded periodogram.
    std::size_t n_fft = 1;
    while (n_fft < 4 * n) n_fft <<= 1;
    std::vector<complexd> buf(n_fft, complexd{});
    for (std::size_t k = 0; k < n; ++k) {
        const double w = 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(k) /
                                               static_cast<double>(n - 1)));
        buf[k] = w * traj.states[k][component];
    }
    fft_inplace(buf);

    const std::size_t half = n_fft / 2;
    std::vector<double> mag(half);
    double peak_mag = 0.0;
    for (std::size_t k = 0; k < half; ++k) {
        mag[k] = std::abs(buf[k]);
        if (k > 0) peak_mag = std::max(peak_mag, mag[k]);
    }
    if (peak_mag == 0.0) return est;  // silent trajectory: no peaks, rate 0

    // Local maxima above a relative floor, strongest kept first, later
    // candidates suppressed inside an already-claimed main lobe.
    const double bin = kTwoPi / (static_cast<double>(n_fft) * dt);
    const double pad_ratio = static_cast<double>(n_fft) / static_cast<double>(n);
    const std::size_t lobe = static_cast<std::size_t>(std::ceil(3.0 * pad_ratio));
    std::vector<std::size_t> candidates;
    for (std::size_t k = 1; k + 1 < half; ++k)
        if (mag[k] > mag[k - 1] && mag[k] >= mag[k + 1] && mag[k] > 1e-4 * peak_mag)
            candidates.push_back(k);
    std::sort(candidates.begin(), candidates.end(),
              [&mag](std::size_t a, std::size_t b) { return mag[a] > mag[b]; });

    std::vector<std::size_t> kept;
    for (std::size_t k : candidates) {
        bool shadowed = false;
        for (std::size_t j : kept)
            if ((k > j ? k - j : j - k) <= lobe) shadowed = true;
        if (!shadowed) kept.push_back(k);
        if (kept.size() == 4) break;
    }

    for (std::size_t k : kept) {
        // parabolic interpolation on log magnitude
        const double la = std::log(std::max(mag[k - 1], 1e-300));
        const double lb = std::log(mag[k]);
        const double lc = std::log(std::max(mag[k + 1], 1e-300));
        const double denom = la - 2.0 * lb + lc;
        const double shift = (denom != 0.0) ? 0.5 * (la - lc) / denom : 0.0;
        est.peaks.push_back({(static_cast<double>(k) + shift) * bin, mag[k] / peak_mag});
    }
    // a pair counts as resolved only when the secondary peak clears the
    // Hann sidelobe level (-31 dB ~ 2.8%), so window leakage of a single
    // tone is not mistaken for a second mode
    if (est.peaks.size() >= 2)
        est.resolved_pair =
            std::abs(est.peaks[0].omega - est.peaks[1].omega) >= est.resolution &&
            est.peaks[1].magnitude >= 0.05 * est.peaks[0].magnitude;

    // Exponential envelope rate from a log-RMS regression over the second
    // half of the span (the dominant mode has taken over by then).
    const std::size_t n_win = 12;
    const std::size_t start = n / 2;
    const std::size_t w_len = (n - start) / n_win;
    if (w_len >= 4) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int used = 0;
        for (std::size_t w = 0; w < n_win; ++w) {
            double ss = 0.0;
            for (std::size_t k = start + w * w_len; k < start + (w + 1) * w_len; ++k)
                ss += traj.states[k][component] * traj.states[k][component];
            const double rms = std::sqrt(ss / static_cast<double>(w_len));
            if (rms <= 0.0) continue;
            const double tx = traj.times[start + w * w_len + w_len / 2];
            const double ly = std::log(rms);
            sx += tx;
            sy += ly;
            sxx += tx * tx;
            sxy += tx * ly;
            ++used;
        }
        if (used >= 4) {
            const double denom = used * sxx - sx * sx;
            if (denom != 0.0) est.rate = (used * sxy - sx * sy) / denom;
        }
    }
    return est;
}

}  // namespace epsense
