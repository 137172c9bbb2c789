#pragma once

#include <string>
#include <vector>

#include "epsense/config.hpp"
#include "epsense/ep_analysis.hpp"
#include "epsense/metrology.hpp"
#include "epsense/timedomain.hpp"

namespace epsense {

/// Everything cmd_report computes, kept for programmatic use; the same
/// numbers go into report.txt / report.json.
struct ReportResult {
    EpResult ep;
    SqrtFit fit;
    double sigma = 0.0;
    DetectionFloor floor;          // from the fitted Y
    LinearFloor linear;
    double eta_at_floor = 0.0;     // enhancement at dw_min
    bool pinned = false;           // fit.y_override was applied
    DetectionFloor floor_pinned;   // only meaningful when pinned
    double eta_pinned = 0.0;
    nlohmann::ordered_json doc;    // structured summary as written
};

struct TimedomainSummary {
    Trajectory trajectory;
    SpectrumEstimate spectrum;
    ModeBranches expected;  // closed-form supermodes at the same parameters
};

/// Subcommand bodies. Each validates, computes, and writes
/// delimiter-separated tables (commented header carrying the config
/// hash) under cfg.output_dir; returns the paths written. Outputs are
/// deterministic: identical config + seed give byte-identical files.
std::vector<std::string> cmd_sweep(const RunConfig& cfg);
std::vector<std::string> cmd_splitting(const RunConfig& cfg);
std::vector<std::string> cmd_exclusion(const RunConfig& cfg);
ReportResult cmd_report(const RunConfig& cfg, std::vector<std::string>* written = nullptr);
TimedomainSummary cmd_timedomain(const RunConfig& cfg, std::vector<std::string>* written = nullptr);

}  // namespace epsense
