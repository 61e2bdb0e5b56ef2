#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "mfgeq/forward.hpp"
#include "mfgeq/hjb.hpp"
#include "mfgeq/measures.hpp"
#include "mfgeq/modelspec.hpp"

namespace mfgeq {

struct PicardConfig {
    std::size_t max_iter = 200;
    /// Stop once sup_t W2 between successive flows is at most this.
    double tau_picard = 1e-3;
    /// Tolerance on the final fixed-point residual.
    double tau_mfe = 1e-2;
    /// Seed offset L; negative means "use the problem's drift bound".
    double drift_bound = -1.0;
    /// Stall detector: stop when the residual plateaus (relative change below
    /// `stall_rel` across `stall_window` nonincreasing iterations).
    std::size_t stall_window = 5;
    double stall_rel = 0.01;
    /// Keep every (flow, value grid) pair, not only the final one.
    bool keep_iterates = false;
    /// Spatial lattice size; the domain is chosen per run from the initial
    /// measure, the horizon and L.
    std::size_t space_intervals = 400;
    double c1 = 10.0;
    double c2 = 100.0;
};

enum class Direction { FromBelow, FromAbove, Probe };

const char* to_string(Direction d);

struct PicardIterate {
    MeasureFlow flow;
    GridFunction grid;
};

/// Record of one monotone Picard run.
struct PicardTrace {
    Direction direction = Direction::FromBelow;
    /// residuals[n] = sup_t W2(iterate n, iterate n+1).
    std::vector<double> residuals;
    /// Mean of the terminal slice of iterate n (iterate 0 is the seed).
    std::vector<double> mean_at_T;
    std::vector<PicardIterate> iterates;

    /// Last iterate and the value grid solved against it.
    std::optional<MeasureFlow> final_flow;
    std::optional<GridFunction> final_grid;
    std::optional<ParticleEnsemble> final_paths;

    /// sup_t W2(Φ(final_flow), final_flow).
    double mfe_residual = 0.0;
    bool converged = false;
    bool stalled = false;
    std::size_t iterations_used = 0;
    /// Per-particle, per-step comparisons made by the monotonicity audit.
    std::size_t audited_pairs = 0;

    const MeasureFlow& flow() const { return *final_flow; }
    const GridFunction& grid() const { return *final_grid; }
};

/// Φ(t0, μ, ν): value grid for the frozen ν, particles driven by its
/// gradient, and their law flow. t0 is ν's first grid time.
struct NashFieldResult {
    GridFunction grid;
    ParticleEnsemble paths;
    MeasureFlow flow;
};

NashFieldResult nash_field_full(const ProblemSpec& spec, const EmpiricalMeasure& mu, const MeasureFlow& nu,
                                const PinnedNoise& noise, const GridConfig& grid);

MeasureFlow nash_field(const ProblemSpec& spec, const EmpiricalMeasure& mu, const MeasureFlow& nu,
                       const PinnedNoise& noise, const GridConfig& grid);

/// sup over grid times of W2(Φ(ν)_t, ν_t).
double mfe_residual(const ProblemSpec& spec, const EmpiricalMeasure& mu, const MeasureFlow& nu,
                    const PinnedNoise& noise, const GridConfig& grid);

/// Seed ξ - L(t - t0) + B, then ν ↦ Φ(ν). Every step is audited: each
/// particle path must be nondecreasing in the iteration index at every step,
/// else AuditError naming (iteration, step, particle). Non-convergence is
/// reported through the trace, not thrown.
PicardTrace minimal_mfe(const ProblemSpec& spec, double t0, const EmpiricalMeasure& mu, const PicardConfig& config,
                        const PinnedNoise& noise);

/// Mirror of minimal_mfe from the seed ξ + L(t - t0) + B, audited for
/// nonincreasing paths.
PicardTrace maximal_mfe(const ProblemSpec& spec, double t0, const EmpiricalMeasure& mu, const PicardConfig& config,
                        const PinnedNoise& noise);

/// Unaudited Picard iteration from the intermediate seed ξ + c(t - t0) + B,
/// used to find further equilibria between the extreme ones.
PicardTrace probe_mfe(const ProblemSpec& spec, double t0, const EmpiricalMeasure& mu, const PicardConfig& config,
                      const PinnedNoise& noise, double seed_drift);

/// Spatial grid used by the Picard runs for this scenario.
GridConfig picard_grid(const ProblemSpec& spec, const EmpiricalMeasure& mu, double horizon,
                       const PicardConfig& config);

struct FlowPropertyReport {
    double t0;
    double t1;
    std::size_t restart_index;
    /// W2 between the original and the restarted flow at each grid time >= t1.
    std::vector<double> times;
    std::vector<double> w2;
    double discrepancy;
    bool original_converged;
    bool restart_converged;
};

/// Computes the minimal flow from (t0, μ), restarts the minimal construction
/// at (t1, ν_{t1}) with fresh noise drawn from `restart_seed`, and reports
/// sup_{t >= t1} W2 between the two. t1 is given as a grid index; index 0
/// returns a zero discrepancy without a restart.
FlowPropertyReport flow_property_check(const ProblemSpec& spec, double t0, std::size_t restart_index,
                                       const EmpiricalMeasure& mu, const PicardConfig& config,
                                       const PinnedNoise& noise, std::uint64_t restart_seed,
                                       Direction direction = Direction::FromBelow);

/// iteration, residual, mean_at_T
void write_trace_csv(std::ostream& os, const PicardTrace& trace);
void write_flow_report_csv(std::ostream& os, const FlowPropertyReport& report);

}  // namespace mfgeq
