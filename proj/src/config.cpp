#include "epsense/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "epsense/errors.hpp"

namespace epsense {

using nlohmann::ordered_json;

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
    throw validation_error("config: " + path + ": " + what);
}

double get_num(const ordered_json& obj, const std::string& prefix,
               const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number()) bad(prefix + key, "expected a number");
    return v.get<double>();
}

int get_int(const ordered_json& obj, const std::string& prefix,
            const std::string& key, int fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) bad(prefix + key, "expected an integer");
    return v.get<int>();
}

bool get_bool(const ordered_json& obj, const std::string& prefix,
              const std::string& key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_boolean()) bad(prefix + key, "expected a boolean");
    return v.get<bool>();
}

std::string get_str(const ordered_json& obj, const std::string& prefix,
                    const std::string& key, const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_string()) bad(prefix + key, "expected a string");
    return v.get<std::string>();
}

void reject_unknown(const ordered_json& obj, const std::string& prefix,
                    const std::set<std::string>& known) {
    for (const auto& item : obj.items())
        if (!known.count(item.key())) bad(prefix + item.key(), "unknown key");
}

void check_positive(double v, const std::string& path) {
    if (!(std::isfinite(v) && v > 0.0)) bad(path, "must be > 0 (got " + detail::num_str(v) + ")");
}

void check_nonneg(double v, const std::string& path) {
    if (!(std::isfinite(v) && v >= 0.0)) bad(path, "must be >= 0 (got " + detail::num_str(v) + ")");
}

void apply_override(ordered_json& doc, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
        throw validation_error("override '" + spec + "': expected dotted.path=value");
    const std::string path = spec.substr(0, eq);
    const std::string value = spec.substr(eq + 1);

    ordered_json* node = &doc;
    std::size_t begin = 0;
    for (;;) {
        const std::size_t dot = path.find('.', begin);
        const std::string key = path.substr(begin, dot - begin);
        if (key.empty()) throw validation_error("override '" + spec + "': empty path segment");
        if (dot == std::string::npos) {
            ordered_json parsed = ordered_json::parse(value, nullptr, false);
            (*node)[key] = parsed.is_discarded() ? ordered_json(value) : parsed;
            return;
        }
        if (!node->contains(key)) (*node)[key] = ordered_json::object();
        node = &(*node)[key];
        if (!node->is_object())
            throw validation_error("override '" + spec + "': '" + key + "' is not a section");
        begin = dot + 1;
    }
}

}  // namespace

RunConfig parse_config(const ordered_json& doc_in,
                       const std::vector<std::string>& overrides) {
    if (!doc_in.is_object()) throw validation_error("config: top level must be an object");
    ordered_json doc = doc_in;
    for (const std::string& o : overrides) apply_override(doc, o);

    reject_unknown(doc, "", {"unit_mode", "seed", "output_dir", "system", "geometry",
                             "sweep", "ep_bracket", "response", "fit", "exclusion",
                             "timedomain"});

    RunConfig cfg;
    cfg.unit_mode = unit_mode_from_string(get_str(doc, "", "unit_mode", "paper-literal"));
    if (doc.contains("seed")) {
        if (doc["seed"].is_number_unsigned()) {
            cfg.seed = doc["seed"].get<std::uint64_t>();
        } else if (doc["seed"].is_number_integer() && doc["seed"].get<long long>() >= 0) {
            cfg.seed = static_cast<std::uint64_t>(doc["seed"].get<long long>());
        } else {
            bad("seed", "expected a nonnegative integer");
        }
    }
    cfg.output_dir = get_str(doc, "", "output_dir", cfg.output_dir);
    if (cfg.output_dir.empty()) bad("output_dir", "must not be empty");

    const ordered_json sys = doc.value("system", ordered_json::object());
    reject_unknown(sys, "system.", {"omega_m", "kappa", "g0", "J", "delta", "gamma1",
                                    "gamma2", "n_cav", "m_t", "Q", "gain_on_first"});
    SystemParams& p = cfg.system;
    p.unit_mode = cfg.unit_mode;
    p.omega_m = get_num(sys, "system.", "omega_m", p.omega_m);
    p.kappa = get_num(sys, "system.", "kappa", p.kappa);
    p.g0 = get_num(sys, "system.", "g0", p.g0);
    p.J = get_num(sys, "system.", "J", p.J);
    p.delta = get_num(sys, "system.", "delta", p.delta);
    p.gamma1 = get_num(sys, "system.", "gamma1", p.gamma1);
    p.gamma2 = get_num(sys, "system.", "gamma2", p.gamma2);
    p.n_cav = get_num(sys, "system.", "n_cav", p.n_cav);
    p.m_t = get_num(sys, "system.", "m_t", 0.0);  // 0: derive from the membrane volume
    p.Q = get_num(sys, "system.", "Q", p.Q);
    p.gain_on_first = get_bool(sys, "system.", "gain_on_first", p.gain_on_first);

    const ordered_json geo = doc.value("geometry", ordered_json::object());
    reject_unknown(geo, "geometry.", {"t_test", "t_source", "gap", "area", "rho_test",
                                      "rho_a", "rho_b", "r_char"});
    SlabGeometry& g = cfg.geometry;
    g.t_test = get_num(geo, "geometry.", "t_test", g.t_test);
    g.t_source = get_num(geo, "geometry.", "t_source", g.t_source);
    g.gap = get_num(geo, "geometry.", "gap", g.gap);
    g.area = get_num(geo, "geometry.", "area", g.area);
    g.rho_test = get_num(geo, "geometry.", "rho_test", g.rho_test);
    g.rho_a = get_num(geo, "geometry.", "rho_a", g.rho_a);
    g.rho_b = get_num(geo, "geometry.", "rho_b", g.rho_b);
    g.r_char = get_num(geo, "geometry.", "r_char", g.r_char);
    try {
        g.validate();
    } catch (const validation_error& err) {
        throw validation_error(std::string("config: ") + err.what());
    }

    if (p.m_t <= 0.0) p.m_t = g.area * g.t_test * g.rho_test;  // membrane mass
    cfg.system_as_given = p;
    if (cfg.unit_mode == UnitMode::angular) {
        // frequency-like inputs are Hz in this mode
        for (double* f : {&p.omega_m, &p.kappa, &p.g0, &p.J, &p.delta, &p.gamma1, &p.gamma2})
            *f *= 2.0 * std::numbers::pi;
    }
    try {
        p.validate();
    } catch (const validation_error& err) {
        throw validation_error(std::string("config: ") + err.what());
    }

    const ordered_json sweep = doc.value("sweep", ordered_json::object());
    reject_unknown(sweep, "sweep.", {"n_min", "n_max", "points", "log_spacing"});
    cfg.sweep.n_min = get_num(sweep, "sweep.", "n_min", cfg.sweep.n_min);
    cfg.sweep.n_max = get_num(sweep, "sweep.", "n_max", cfg.sweep.n_max);
    cfg.sweep.points = get_int(sweep, "sweep.", "points", cfg.sweep.points);
    cfg.sweep.log_spacing = get_bool(sweep, "sweep.", "log_spacing", cfg.sweep.log_spacing);
    check_nonneg(cfg.sweep.n_min, "sweep.n_min");
    if (!(cfg.sweep.n_max >= cfg.sweep.n_min)) bad("sweep.n_max", "must be >= sweep.n_min");
    if (cfg.sweep.points < 1) bad("sweep.points", "must be >= 1");
    if (cfg.sweep.points > 1 && !(cfg.sweep.n_max > cfg.sweep.n_min))
        bad("sweep.n_max", "must be > sweep.n_min for a multi-point grid");
    if (cfg.sweep.log_spacing) check_positive(cfg.sweep.n_min, "sweep.n_min");

    const ordered_json ep = doc.value("ep_bracket", ordered_json::object());
    reject_unknown(ep, "ep_bracket.", {"n_lo", "n_hi"});
    cfg.ep_bracket.n_lo = get_num(ep, "ep_bracket.", "n_lo", cfg.ep_bracket.n_lo);
    cfg.ep_bracket.n_hi = get_num(ep, "ep_bracket.", "n_hi", cfg.ep_bracket.n_hi);
    check_nonneg(cfg.ep_bracket.n_lo, "ep_bracket.n_lo");
    if (!(cfg.ep_bracket.n_hi > cfg.ep_bracket.n_lo)) bad("ep_bracket.n_hi", "must be > ep_bracket.n_lo");

    const ordered_json resp = doc.value("response", ordered_json::object());
    reject_unknown(resp, "response.", {"dw_rel_min", "dw_rel_max", "points"});
    cfg.response.dw_rel_min = get_num(resp, "response.", "dw_rel_min", cfg.response.dw_rel_min);
    cfg.response.dw_rel_max = get_num(resp, "response.", "dw_rel_max", cfg.response.dw_rel_max);
    cfg.response.points = get_int(resp, "response.", "points", cfg.response.points);
    check_positive(cfg.response.dw_rel_min, "response.dw_rel_min");
    if (!(cfg.response.dw_rel_max > cfg.response.dw_rel_min))
        bad("response.dw_rel_max", "must be > response.dw_rel_min");
    if (!(cfg.response.dw_rel_max < 1.0)) bad("response.dw_rel_max", "must be < 1");
    if (cfg.response.points < 8) bad("response.points", "must be >= 8");

    const ordered_json fit = doc.value("fit", ordered_json::object());
    reject_unknown(fit, "fit.", {"y_override"});
    cfg.fit.y_override = get_num(fit, "fit.", "y_override", cfg.fit.y_override);
    check_nonneg(cfg.fit.y_override, "fit.y_override");

    const ordered_json exc = doc.value("exclusion", ordered_json::object());
    reject_unknown(exc, "exclusion.", {"lambda_min", "lambda_max", "points", "overlay_file"});
    cfg.exclusion.lambda_min = get_num(exc, "exclusion.", "lambda_min", cfg.exclusion.lambda_min);
    cfg.exclusion.lambda_max = get_num(exc, "exclusion.", "lambda_max", cfg.exclusion.lambda_max);
    cfg.exclusion.points = get_int(exc, "exclusion.", "points", cfg.exclusion.points);
    cfg.exclusion.overlay_file = get_str(exc, "exclusion.", "overlay_file", cfg.exclusion.overlay_file);
    check_positive(cfg.exclusion.lambda_min, "exclusion.lambda_min");
    if (!(cfg.exclusion.lambda_max > cfg.exclusion.lambda_min))
        bad("exclusion.lambda_max", "must be > exclusion.lambda_min");
    if (cfg.exclusion.points < 2) bad("exclusion.points", "must be >= 2");
    if (!cfg.exclusion.overlay_file.empty()) {
        std::ifstream probe(cfg.exclusion.overlay_file);
        if (!probe.good())
            bad("exclusion.overlay_file", "path not resolvable: " + cfg.exclusion.overlay_file);
    }

    const ordered_json td = doc.value("timedomain", ordered_json::object());
    reject_unknown(td, "timedomain.", {"periods", "samples_per_period", "initial_state"});
    cfg.timedomain.periods = get_num(td, "timedomain.", "periods", cfg.timedomain.periods);
    cfg.timedomain.samples_per_period =
        get_num(td, "timedomain.", "samples_per_period", cfg.timedomain.samples_per_period);
    check_positive(cfg.timedomain.periods, "timedomain.periods");
    if (!(cfg.timedomain.samples_per_period >= 20.0))
        bad("timedomain.samples_per_period", "must be >= 20");
    if (td.contains("initial_state")) {
        const auto& st = td.at("initial_state");
        if (!st.is_array() || st.size() != 4) bad("timedomain.initial_state", "expected 4 numbers");
        for (int i = 0; i < 4; ++i) {
            if (!st[i].is_number()) bad("timedomain.initial_state", "expected 4 numbers");
            cfg.timedomain.initial_state[i] = st[i].get<double>();
            if (!std::isfinite(cfg.timedomain.initial_state[i]))
                bad("timedomain.initial_state", "entries must be finite");
        }
    }

    return cfg;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in.good()) throw validation_error("config: cannot open '" + path + "'");
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw validation_error("config: parse error in '" + path + "': " + e.what());
    }
    return parse_config(doc, overrides);
}

RunConfig default_config() { return parse_config(ordered_json::object()); }

ordered_json serialize_config(const RunConfig& cfg) {
    // The system block is written from the as-given numbers (pre unit
    // conversion) so the round trip is the identity bit for bit.
    const SystemParams& s = cfg.system_as_given;
    ordered_json doc;
    doc["unit_mode"] = to_string(cfg.unit_mode);
    doc["seed"] = cfg.seed;
    doc["output_dir"] = cfg.output_dir;
    doc["system"] = {{"omega_m", s.omega_m},
                     {"kappa", s.kappa},
                     {"g0", s.g0},
                     {"J", s.J},
                     {"delta", s.delta},
                     {"gamma1", s.gamma1},
                     {"gamma2", s.gamma2},
                     {"n_cav", s.n_cav},
                     {"m_t", s.m_t},
                     {"Q", s.Q},
                     {"gain_on_first", s.gain_on_first}};
    doc["geometry"] = {{"t_test", cfg.geometry.t_test},
                       {"t_source", cfg.geometry.t_source},
                       {"gap", cfg.geometry.gap},
                       {"area", cfg.geometry.area},
                       {"rho_test", cfg.geometry.rho_test},
                       {"rho_a", cfg.geometry.rho_a},
                       {"rho_b", cfg.geometry.rho_b},
                       {"r_char", cfg.geometry.r_char}};
    doc["sweep"] = {{"n_min", cfg.sweep.n_min},
                    {"n_max", cfg.sweep.n_max},
                    {"points", cfg.sweep.points},
                    {"log_spacing", cfg.sweep.log_spacing}};
    doc["ep_bracket"] = {{"n_lo", cfg.ep_bracket.n_lo}, {"n_hi", cfg.ep_bracket.n_hi}};
    doc["response"] = {{"dw_rel_min", cfg.response.dw_rel_min},
                       {"dw_rel_max", cfg.response.dw_rel_max},
                       {"points", cfg.response.points}};
    doc["fit"] = {{"y_override", cfg.fit.y_override}};
    doc["exclusion"] = {{"lambda_min", cfg.exclusion.lambda_min},
                        {"lambda_max", cfg.exclusion.lambda_max},
                        {"points", cfg.exclusion.points},
                        {"overlay_file", cfg.exclusion.overlay_file}};
    doc["timedomain"] = {{"periods", cfg.timedomain.periods},
                         {"samples_per_period", cfg.timedomain.samples_per_period},
                         {"initial_state", cfg.timedomain.initial_state}};
    return doc;
}

std::string canonical_dump(const RunConfig& cfg) { return serialize_config(cfg).dump(2); }

std::uint64_t config_hash(const RunConfig& cfg) {
    // output_dir does not influence any computed number, so it is left
    // out: the same physics config hashes the same wherever it writes
    ordered_json doc = serialize_config(cfg);
    doc.erase("output_dir");
    const std::string s = doc.dump(2);
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace epsense
