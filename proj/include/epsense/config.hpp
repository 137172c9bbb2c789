#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "epsense/params.hpp"
#include "epsense/yukawa.hpp"

namespace epsense {

struct SweepSpec {
    double n_min = 1e8;
    double n_max = 1.2e11;
    int points = 1200;
    bool log_spacing = false;
};

struct EpBracket {
    double n_lo = 1e8;
    double n_hi = 1e12;
};

struct ResponseSpec {
    double dw_rel_min = 1e-6;  // perturbation window relative to omega_m
    double dw_rel_max = 1e-3;
    int points = 25;
};

struct FitSpec {
    double y_override = 0.0;  // 0: use the fitted Y; > 0: pin the chain to this Y
};

struct ExclusionSpec {
    double lambda_min = 1e-8;
    double lambda_max = 1e-4;
    int points = 121;
    std::string overlay_file;  // optional two-column overlay, echoed to output
};

struct TimedomainSpec {
    double periods = 400.0;          // span in carrier periods
    double samples_per_period = 24.0;
    std::array<double, 4> initial_state{1.0, 0.0, 0.0, 0.0};
};

struct RunConfig {
    UnitMode unit_mode = UnitMode::paper_literal;
    std::uint64_t seed = 0;
    std::string output_dir = "out";
    SystemParams system;           // post-conversion, used by all math
    SystemParams system_as_given;  // numbers exactly as configured; keeps
                                   // the serialize round trip bit-stable
    SlabGeometry geometry;
    SweepSpec sweep;
    EpBracket ep_bracket;
    ResponseSpec response;
    FitSpec fit;
    ExclusionSpec exclusion;
    TimedomainSpec timedomain;
};

/// Parse + default-fill + validate one JSON document. Overrides are
/// "dotted.path=value" strings applied to the raw document before
/// validation. Unknown keys and invalid values are rejected with the
/// offending path in the message. In angular unit mode the frequency-like
/// system fields are converted from Hz to rad/s here.
RunConfig parse_config(const nlohmann::ordered_json& doc,
                       const std::vector<std::string>& overrides = {});
RunConfig load_config(const std::string& path,
                      const std::vector<std::string>& overrides = {});
RunConfig default_config();

/// Canonical serialized form (stable key order, default-filled). The
/// round trip parse(serialize(cfg)) reproduces cfg exactly.
nlohmann::ordered_json serialize_config(const RunConfig& cfg);
std::string canonical_dump(const RunConfig& cfg);

/// FNV-1a 64 over the canonical dump; stamped into output headers.
std::uint64_t config_hash(const RunConfig& cfg);

}  // namespace epsense
