#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "mfgeq/closedform.hpp"
#include "mfgeq/equilibrium.hpp"

namespace mfgeq {

/// Minimal and maximal value functions and their x-gradients at one point.
struct ValueSample {
    double t;
    double x;
    double mu_mean;
    double v_min;
    double v_max;
    double dxv_min;
    double dxv_max;
    bool converged_min;
    bool converged_max;
};

/// Noise recipe for scenario runs: one 64-bit seed, N particles, M steps.
struct NoiseSpec {
    std::uint64_t seed = 1;
    std::size_t particles = 1000;
    std::size_t steps = 100;
    bool antithetic = true;

    PinnedNoise make(double horizon) const;
};

/// V̲(t, x, μ) = v(ν̲^{t,μ}; t, x) and V̄ likewise, read from the converged
/// value grids. Non-converged runs are flagged in the sample.
ValueSample eval_value(const ProblemSpec& spec, double t, double T, double x, const EmpiricalMeasure& mu,
                       const PicardConfig& config, const NoiseSpec& noise);

/// Same, reusing traces that were already computed at (t, μ).
ValueSample value_from_traces(double x, const EmpiricalMeasure& mu, const PicardTrace& lower,
                              const PicardTrace& upper);

enum class ScanAxis { Mean, Time };

const char* to_string(ScanAxis a);

struct ScanPoint {
    double axis_value;
    double dxv_min;
    double dxv_max;
    bool converged_min;
    bool converged_max;
};

struct JumpReport {
    ScanAxis axis;
    std::vector<ScanPoint> points;
    /// Index i of the largest |Δ| between points i and i + 1.
    std::size_t jump_index = 0;
    double location = 0.0;
    double left_value = 0.0;
    double right_value = 0.0;
    double jump = 0.0;
    double threshold = 0.0;
    bool found = false;
    /// Which selector the jump was located on.
    closedform::Selector selector = closedform::Selector::Min;
};

/// Locates the largest adjacent jump of the chosen selector along a
/// precomputed table. threshold <= 0 picks 10 × the median adjacent
/// difference (the smooth-part noise floor).
JumpReport locate_jump(ScanAxis axis, std::vector<ScanPoint> points, closedform::Selector sel, double threshold);

struct ScanRequest {
    ScanAxis axis = ScanAxis::Mean;
    double lo = 0.0;
    double hi = 0.0;
    double step = 0.01;
    /// Fixed coordinates: the mean axis moves μ by a constant shift at fixed
    /// t0; the time axis moves t0 at fixed μ.
    double t0 = 0.0;
    double T = 1.0;
    double x = 0.0;
    closedform::Selector selector = closedform::Selector::Min;
    double threshold = 0.0;
};

/// Runs both extreme Picard schemes at every scan point (same seed at every
/// point, so neighbouring points share their noise) and locates the jump.
JumpReport scan_discontinuity(const ProblemSpec& spec, const EmpiricalMeasure& mu, const ScanRequest& request,
                              const PicardConfig& config, const NoiseSpec& noise);

/// axis_value, dxv_min, dxv_max, converged_min, converged_max
void write_scan_csv(std::ostream& os, const JumpReport& report);
void write_jump_csv(std::ostream& os, const JumpReport& report);
void write_values_csv_header(std::ostream& os);
void write_values_csv_row(std::ostream& os, const ValueSample& s);

}  // namespace mfgeq
