#include "epsense/workbench.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "epsense/errors.hpp"
#include "epsense/yukawa.hpp"

namespace epsense {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Reference design targets the report compares against.
struct ReferenceTargets {
    double n0 = 6.2643e10;
    double Y = 5e4;
    double sigma = 8.3e-3;
    double dw_min = 1.38e-9;
    double eta = 6.4e6;
    double grad_min = 1e-14;
    double f_min = 1e-20;
};

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string hash_hex(const RunConfig& cfg) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    return buf;
}

class TableWriter {
  public:
    TableWriter(const fs::path& path, const RunConfig& cfg, const std::string& tool,
                const std::vector<std::string>& columns)
        : out_(path, std::ios::binary) {
        if (!out_.good())
            throw validation_error("cannot open output file '" + path.string() + "'");
        out_ << "# epsense " << tool << "\n";
        out_ << "# config-hash: " << hash_hex(cfg) << "\n";
        out_ << "# seed: " << cfg.seed << "\n";
        out_ << "# columns:";
        for (const auto& c : columns) out_ << ' ' << c;
        out_ << "\n";
    }

    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out_ << '\t';
            out_ << g17(values[i]);
        }
        out_ << '\n';
    }

  private:
    std::ofstream out_;
};

fs::path ensure_out_dir(const RunConfig& cfg) {
    fs::path dir(cfg.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw validation_error("cannot create output directory '" + cfg.output_dir + "'");
    return dir;
}

std::vector<double> make_grid(double lo, double hi, int points, bool log_spacing) {
    std::vector<double> g;
    g.reserve(points);
    if (points == 1) {
        g.push_back(lo);
        return g;
    }
    if (log_spacing) {
        const double step = std::log(hi / lo) / (points - 1);
        for (int i = 0; i < points; ++i) g.push_back(lo * std::exp(step * i));
    } else {
        const double step = (hi - lo) / (points - 1);
        for (int i = 0; i < points; ++i) g.push_back(lo + step * i);
    }
    g.back() = hi;
    return g;
}

void echo_overlay(const RunConfig& cfg, const fs::path& dir,
                  std::vector<std::string>& written) {
    if (cfg.exclusion.overlay_file.empty()) return;
    std::ifstream in(cfg.exclusion.overlay_file, std::ios::binary);
    if (!in.good())
        throw validation_error("exclusion.overlay_file: path not resolvable: " +
                               cfg.exclusion.overlay_file);
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());

    // check the two-column shape before passing it through untouched
    std::size_t rows = 0;
    std::size_t pos = 0;
    while (pos <= content.size()) {
        const std::size_t eol = content.find('\n', pos);
        std::string line = content.substr(pos, eol == std::string::npos ? eol : eol - pos);
        pos = eol == std::string::npos ? content.size() + 1 : eol + 1;
        const std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        double a = 0.0, b = 0.0;
        char extra = 0;
        if (std::sscanf(line.c_str(), "%lf %lf %c", &a, &b, &extra) != 2)
            throw validation_error("overlay file '" + cfg.exclusion.overlay_file +
                                   "': expected two numeric columns, got: " + line);
        ++rows;
    }
    if (rows == 0)
        throw validation_error("overlay file '" + cfg.exclusion.overlay_file +
                               "' contains no data rows");

    const fs::path dest = dir / ("overlay_" + fs::path(cfg.exclusion.overlay_file)
                                                  .filename()
                                                  .string());
    std::ofstream out(dest, std::ios::binary);
    out << content;
    written.push_back(dest.string());
}

std::vector<double> response_grid(const RunConfig& cfg) {
    return make_grid(cfg.response.dw_rel_min * cfg.system.omega_m,
                     cfg.response.dw_rel_max * cfg.system.omega_m,
                     cfg.response.points, true);
}

}  // namespace

std::vector<std::string> cmd_sweep(const RunConfig& cfg) {
    const fs::path dir = ensure_out_dir(cfg);
    const auto grid =
        make_grid(cfg.sweep.n_min, cfg.sweep.n_max, cfg.sweep.points, cfg.sweep.log_spacing);
    const SweepResult sw = sweep_branches(cfg.system, grid);

    const fs::path path = dir / "sweep.tsv";
    TableWriter table(path, cfg, "sweep",
                      {"n_cav", "re_plus", "re_minus", "im_plus", "im_minus", "valid"});
    for (std::size_t i = 0; i < sw.n_values.size(); ++i)
        table.row({sw.n_values[i], sw.re_plus[i], sw.re_minus[i], sw.im_plus[i],
                   sw.im_minus[i], static_cast<double>(sw.valid[i])});
    return {path.string()};
}

std::vector<std::string> cmd_splitting(const RunConfig& cfg) {
    const fs::path dir = ensure_out_dir(cfg);
    const EpResult ep = find_ep(cfg.system, cfg.ep_bracket.n_lo, cfg.ep_bracket.n_hi);

    std::vector<std::string> written;
    const auto dws = response_grid(cfg);
    const auto response = splitting_response(cfg.system, ep.n0, dws);
    {
        const fs::path path = dir / "splitting_response.tsv";
        TableWriter table(path, cfg, "splitting", {"dw", "dD"});
        for (const auto& r : response) table.row({r.dw, r.dD});
        written.push_back(path.string());
    }
    {
        const auto n_grid = make_grid(cfg.sweep.n_min, cfg.sweep.n_max, cfg.sweep.points,
                                      cfg.sweep.log_spacing);
        const auto curves =
            splitting_curves(cfg.system, n_grid, 1e-3 * cfg.system.omega_m);
        const fs::path path = dir / "splitting_curves.tsv";
        TableWriter table(path, cfg, "splitting", {"n_cav", "d_before", "d_after"});
        for (std::size_t i = 0; i < curves.n_values.size(); ++i)
            table.row({curves.n_values[i], curves.d_before[i], curves.d_after[i]});
        written.push_back(path.string());
    }
    {
        const SqrtFit fit = fit_sqrt_law(response);
        const fs::path path = dir / "sqrt_fit.txt";
        std::ofstream out(path, std::ios::binary);
        out << "# epsense splitting fit\n";
        out << "# config-hash: " << hash_hex(cfg) << "\n";
        out << "n0           = " << g17(ep.n0) << "\n";
        out << "Y            = " << g17(fit.Y) << "\n";
        out << "exponent     = " << g17(fit.exponent) << "\n";
        out << "rms_residual = " << g17(fit.rms_residual) << "\n";
        out << "window_lo    = " << g17(fit.window_lo) << "\n";
        out << "window_hi    = " << g17(fit.window_hi) << "\n";
        written.push_back(path.string());
    }
    return written;
}

std::vector<std::string> cmd_exclusion(const RunConfig& cfg) {
    const fs::path dir = ensure_out_dir(cfg);
    std::vector<std::string> written;

    const EpResult ep = find_ep(cfg.system, cfg.ep_bracket.n_lo, cfg.ep_bracket.n_hi);
    const auto response = splitting_response(cfg.system, ep.n0, response_grid(cfg));
    const SqrtFit fit = fit_sqrt_law(response);
    const double Y = cfg.fit.y_override > 0.0 ? cfg.fit.y_override : fit.Y;

    const double sigma = linewidth(cfg.system.omega_m, cfg.system.Q);
    const DetectionFloor floor = detection_floor(sigma, Y, cfg.system.m_t,
                                                 cfg.system.omega_m,
                                                 cfg.geometry.r_characteristic());

    const auto lambdas = make_grid(cfg.exclusion.lambda_min, cfg.exclusion.lambda_max,
                                   cfg.exclusion.points, true);
    const ExclusionCurve curve = exclusion_curve(floor, cfg.geometry, lambdas);

    const fs::path path = dir / "exclusion.tsv";
    TableWriter table(path, cfg, "exclusion", {"lambda", "alpha_min_ep", "alpha_min_linear"});
    for (std::size_t i = 0; i < curve.lambdas.size(); ++i)
        table.row({curve.lambdas[i], curve.alphas[i], curve.alphas_linear[i]});
    written.push_back(path.string());

    echo_overlay(cfg, dir, written);
    return written;
}

ReportResult cmd_report(const RunConfig& cfg, std::vector<std::string>* written) {
    const fs::path dir = ensure_out_dir(cfg);
    const ReferenceTargets ref;
    ReportResult rep;

    auto stage = [](const char* name, auto&& fn) {
        try {
            return fn();
        } catch (const validation_error& e) {
            if (std::string(e.what()).rfind(name, 0) == 0) throw;
            throw validation_error(std::string(name) + ": " + e.what());
        } catch (const numerical_error& e) {
            if (std::string(e.what()).rfind(name, 0) == 0) throw;
            throw numerical_error(std::string(name) + ": " + e.what());
        }
    };

    rep.ep = stage("find_ep", [&] {
        return find_ep(cfg.system, cfg.ep_bracket.n_lo, cfg.ep_bracket.n_hi);
    });
    const auto response = stage("splitting_response", [&] {
        return splitting_response(cfg.system, rep.ep.n0, response_grid(cfg));
    });
    rep.fit = stage("fit_sqrt_law", [&] { return fit_sqrt_law(response); });
    rep.sigma = stage("linewidth", [&] {
        return linewidth(cfg.system.omega_m, cfg.system.Q);
    });

    const double r_char = cfg.geometry.r_characteristic();
    rep.floor = stage("detection_floor", [&] {
        return detection_floor(rep.sigma, rep.fit.Y, cfg.system.m_t, cfg.system.omega_m,
                               r_char);
    });
    rep.linear = floor_without_ep(rep.sigma, cfg.system.m_t, cfg.system.omega_m);
    rep.eta_at_floor = enhancement_factor(rep.fit.Y, rep.floor.dw_min);

    if (cfg.fit.y_override > 0.0) {
        rep.pinned = true;
        rep.floor_pinned = detection_floor(rep.sigma, cfg.fit.y_override, cfg.system.m_t,
                                           cfg.system.omega_m, r_char);
        rep.eta_pinned = enhancement_factor(cfg.fit.y_override, rep.floor_pinned.dw_min);
    }

    const auto lambdas = make_grid(cfg.exclusion.lambda_min, cfg.exclusion.lambda_max,
                                   cfg.exclusion.points, true);
    const ExclusionCurve curve = stage("exclusion_curve", [&] {
        return exclusion_curve(rep.pinned ? rep.floor_pinned : rep.floor, cfg.geometry,
                               lambdas);
    });

    // Newtonian differential force between the plates: flat-field, so it
    // carries no gradient in this limit; reported as a background scale.
    const double newton_force_contrast =
        2.0 * std::numbers::pi * kGNewton * cfg.geometry.rho_test *
        (cfg.geometry.rho_a - cfg.geometry.rho_b) * cfg.geometry.area *
        cfg.geometry.t_test * cfg.geometry.t_source;

    ordered_json doc;
    doc["config_hash"] = hash_hex(cfg);
    doc["ep"] = {{"n0", rep.ep.n0},
                 {"omega_eff", rep.ep.omega_eff_ep},
                 {"gamma_eff", rep.ep.gamma_eff_ep},
                 {"discriminant_residual", rep.ep.residual}};
    doc["sqrt_law"] = {{"Y", rep.fit.Y},
                       {"exponent", rep.fit.exponent},
                       {"rms_residual", rep.fit.rms_residual},
                       {"window_lo", rep.fit.window_lo},
                       {"window_hi", rep.fit.window_hi}};
    doc["floor"] = {{"sigma", rep.sigma},
                    {"dw_min", rep.floor.dw_min},
                    {"grad_min", rep.floor.grad_min},
                    {"f_min", rep.floor.f_min},
                    {"r_char", r_char},
                    {"eta_at_dw_min", rep.eta_at_floor}};
    doc["floor_linear"] = {{"dw_min", rep.linear.dw_min}, {"grad_min", rep.linear.grad_min}};
    if (rep.pinned) {
        doc["floor_pinned"] = {{"Y", cfg.fit.y_override},
                               {"dw_min", rep.floor_pinned.dw_min},
                               {"grad_min", rep.floor_pinned.grad_min},
                               {"f_min", rep.floor_pinned.f_min},
                               {"eta_at_dw_min", rep.eta_pinned}};
    }
    doc["exclusion_samples"] = ordered_json::array();
    for (std::size_t i = 0; i < curve.lambdas.size();
         i += std::max<std::size_t>(1, (curve.lambdas.size() - 1) / 6)) {
        doc["exclusion_samples"].push_back(
            {{"lambda", curve.lambdas[i]}, {"alpha_min_ep", curve.alphas[i]},
             {"alpha_min_linear", curve.alphas_linear[i]}});
    }
    doc["systematics"] = {{"newtonian_force_contrast", newton_force_contrast},
                          {"f_min_is_grad_times_r_char", true}};

    const DetectionFloor& chain = rep.pinned ? rep.floor_pinned : rep.floor;
    const double eta_chain = rep.pinned ? rep.eta_pinned : rep.eta_at_floor;
    doc["reference_comparison"] = {
        {"n0", {{"reference", ref.n0}, {"computed", rep.ep.n0}, {"ratio", rep.ep.n0 / ref.n0}}},
        {"Y", {{"reference", ref.Y}, {"computed", rep.fit.Y}, {"ratio", rep.fit.Y / ref.Y}}},
        {"sigma",
         {{"reference", ref.sigma}, {"computed", rep.sigma}, {"ratio", rep.sigma / ref.sigma}}},
        {"dw_min",
         {{"reference", ref.dw_min}, {"computed", chain.dw_min},
          {"ratio", chain.dw_min / ref.dw_min}}},
        {"eta",
         {{"reference", ref.eta}, {"computed", eta_chain}, {"ratio", eta_chain / ref.eta}}},
        {"grad_min",
         {{"reference", ref.grad_min}, {"computed", chain.grad_min},
          {"ratio", chain.grad_min / ref.grad_min}}},
        {"f_min",
         {{"reference", ref.f_min}, {"computed", chain.f_min},
          {"ratio", chain.f_min / ref.f_min}}}};
    rep.doc = doc;

    const fs::path jpath = dir / "report.json";
    {
        std::ofstream out(jpath, std::ios::binary);
        out << doc.dump(2) << "\n";
    }
    const fs::path tpath = dir / "report.txt";
    {
        std::ofstream out(tpath, std::ios::binary);
        out << "# epsense report\n";
        out << "# config-hash: " << hash_hex(cfg) << "\n";
        auto line = [&out](const char* k, double v) {
            out << k << " = " << g17(v) << "\n";
        };
        line("ep.n0", rep.ep.n0);
        line("ep.omega_eff", rep.ep.omega_eff_ep);
        line("ep.gamma_eff", rep.ep.gamma_eff_ep);
        line("sqrt_law.Y", rep.fit.Y);
        line("sqrt_law.exponent", rep.fit.exponent);
        line("sqrt_law.rms_residual", rep.fit.rms_residual);
        line("floor.sigma", rep.sigma);
        line("floor.dw_min", rep.floor.dw_min);
        line("floor.grad_min", rep.floor.grad_min);
        line("floor.f_min", rep.floor.f_min);
        line("floor.eta_at_dw_min", rep.eta_at_floor);
        line("floor_linear.dw_min", rep.linear.dw_min);
        line("floor_linear.grad_min", rep.linear.grad_min);
        if (rep.pinned) {
            line("floor_pinned.Y", cfg.fit.y_override);
            line("floor_pinned.dw_min", rep.floor_pinned.dw_min);
            line("floor_pinned.grad_min", rep.floor_pinned.grad_min);
            line("floor_pinned.f_min", rep.floor_pinned.f_min);
            line("floor_pinned.eta_at_dw_min", rep.eta_pinned);
        }
        for (const auto& item : doc["reference_comparison"].items()) {
            out << "reference." << item.key() << " = " << g17(item.value()["reference"])
                << "  computed = " << g17(item.value()["computed"])
                << "  ratio = " << g17(item.value()["ratio"]) << "\n";
        }
    }
    if (written) {
        written->push_back(jpath.string());
        written->push_back(tpath.string());
    }
    return rep;
}

TimedomainSummary cmd_timedomain(const RunConfig& cfg, std::vector<std::string>* written) {
    const fs::path dir = ensure_out_dir(cfg);
    TimedomainSummary sum;

    const EffectiveParams e = effective_params(cfg.system);
    sum.expected = eigen_closed_form(e);
    const double w_fast =
        std::max(std::abs(sum.expected.omega_plus), std::abs(sum.expected.omega_minus));
    if (!(w_fast > 0.0))
        throw validation_error("cmd_timedomain: degenerate zero-frequency system");

    const double period = 2.0 * std::numbers::pi / w_fast;
    const double dt_out = period / cfg.timedomain.samples_per_period;
    const double t_span = cfg.timedomain.periods * period;

    sum.trajectory = integrate_eom(e, cfg.timedomain.initial_state, t_span, dt_out);
    sum.spectrum = extract_spectrum(sum.trajectory, 0);

    const fs::path tpath = dir / "trajectory.tsv";
    {
        TableWriter table(tpath, cfg, "timedomain", {"t", "q1", "p1", "q2", "p2"});
        for (std::size_t i = 0; i < sum.trajectory.times.size(); ++i) {
            const State4& s = sum.trajectory.states[i];
            table.row({sum.trajectory.times[i], s[0], s[1], s[2], s[3]});
        }
    }
    const fs::path spath = dir / "spectrum.txt";
    {
        std::ofstream out(spath, std::ios::binary);
        out << "# epsense timedomain spectrum\n";
        out << "# config-hash: " << hash_hex(cfg) << "\n";
        out << "truncated        = " << (sum.trajectory.truncated ? 1 : 0) << "\n";
        out << "resolution       = " << g17(sum.spectrum.resolution) << "\n";
        out << "resolved_pair    = " << (sum.spectrum.resolved_pair ? 1 : 0) << "\n";
        out << "envelope_rate    = " << g17(sum.spectrum.rate) << "\n";
        out << "expected_re_plus = " << g17(sum.expected.omega_plus.real()) << "\n";
        out << "expected_re_minus= " << g17(sum.expected.omega_minus.real()) << "\n";
        out << "expected_im_plus = " << g17(sum.expected.omega_plus.imag()) << "\n";
        out << "expected_im_minus= " << g17(sum.expected.omega_minus.imag()) << "\n";
        for (std::size_t i = 0; i < sum.spectrum.peaks.size(); ++i) {
            out << "peak_" << i << "_omega = " << g17(sum.spectrum.peaks[i].omega)
                << "  magnitude = " << g17(sum.spectrum.peaks[i].magnitude) << "\n";
        }
    }
    if (written) {
        written->push_back(tpath.string());
        written->push_back(spath.string());
    }
    return sum;
}

}  // namespace epsense
