#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "mfgeq/config.hpp"
#include "mfgeq/equilibrium.hpp"
#include "mfgeq/modelspec.hpp"
#include "mfgeq/value.hpp"

namespace mfgeq {

const char* version() noexcept;

struct ScenarioResult {
    LintReport lint;
    PicardTrace lower;
    PicardTrace upper;
    std::vector<ValueSample> values;
    /// Closed-form minimal / maximal p when the problem is section8.
    std::optional<double> p_min_closed;
    std::optional<double> p_max_closed;
};

/// lint, minimal_mfe, maximal_mfe, values at the probes. Writes
/// run_metadata.txt, lint.csv, trace_min.csv, trace_max.csv, values.csv and
/// summary.csv into cfg.out_dir. Throws AuditError on a failed lint, a broken
/// sandwich ν̲ ⪯ ν̄ or dxv_min > dxv_max at a probe.
ScenarioResult run_scenario(const ScenarioConfig& cfg, std::ostream& log);

struct Section8Options {
    double lambda_lo = 0.2;
    double lambda_hi = 5.0;
    double lambda_step = 0.05;
    double m_lo = -3.0;
    double m_hi = 3.0;
    double m_step = 0.05;

    std::vector<double> compare_lambdas{0.8, 1.25, 1.6, 2.5, 4.0};
    std::vector<double> compare_means{-0.6, -0.3, 0.0, 0.3, 0.6};
    std::size_t particles = 10000;
    std::size_t time_steps = 200;
    std::size_t space_intervals = 400;
    double init_std = 0.5;
    std::uint64_t seed = 1;
    bool run_numeric = true;
};

struct ComparisonRow {
    double lambda;
    double m;
    double p_min_closed;
    double p_max_closed;
    double p_min_num;
    double p_max_num;
    bool converged_min;
    bool converged_max;
    std::size_t iterations_min;
    std::size_t iterations_max;
    /// Particle pairs compared by the monotone-iteration audit (both runs).
    std::size_t audited_pairs;
    bool sandwich;
};

struct DiscontinuityRow {
    const char* axis;  // "m" or "lambda"
    double lambda;
    double m;
    closedform::Selector selector;
    double left;
    double right;
};

struct Section8Result {
    std::size_t lattice_points = 0;
    std::size_t three_root_points = 0;
    /// Lattice points whose root count disagrees with {λ < 2, |m| < m₂}.
    std::size_t region_mismatches = 0;
    std::vector<DiscontinuityRow> discontinuities;
    std::vector<ComparisonRow> comparison;
    double max_err_min = 0.0;
    double max_err_max = 0.0;
};

/// Writes phase_diagram.csv, discontinuity.csv and (if run_numeric)
/// comparison.csv into out_dir.
Section8Result run_section8_suite(const std::filesystem::path& out_dir, const Section8Options& opt, std::ostream& log);

/// One comparison cell: section8 with horizon 1/λ, initial Gaussian quantiles
/// of mean m. Audits are live, so an ordering violation throws.
ComparisonRow compare_section8(double lambda, double m, const Section8Options& opt);

struct FlowCheckResult {
    FlowPropertyReport report;
    double noise_floor = 0.0;
    double tau_flow = 0.0;
    bool pass = false;
};

/// Flow property at t1 on the minimal equilibrium. The noise floor is the sup
/// W₂ between minimal flows from two independent seeds; τ_flow = 3 × floor.
/// Writes flow_check.csv and flow_summary.csv.
FlowCheckResult run_flow_check(const ScenarioConfig& cfg, double t1, std::ostream& log);

/// Writes scan.csv, jump.csv and, for section8, scan_oracle.csv.
JumpReport run_scan(const ScenarioConfig& cfg, ScanAxis axis, double lo, double hi, double step,
                    closedform::Selector selector, std::ostream& log);

}  // namespace mfgeq
