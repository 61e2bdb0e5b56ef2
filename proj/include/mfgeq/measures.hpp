#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace mfgeq {

/// Uniform-weight empirical probability measure on the real line.
///
/// Samples are kept sorted ascending, so the i-th entry is the i-th order
/// statistic and the quantile coupling between two measures of equal size is
/// simply index-wise pairing.
class EmpiricalMeasure {
public:
    /// Sorts (stable) and validates; throws std::invalid_argument on an empty
    /// or non-finite sample set.
    explicit EmpiricalMeasure(std::vector<double> samples);

    /// Adopts an already sorted vector; throws if it is not sorted.
    static EmpiricalMeasure from_sorted(std::vector<double> samples);

    std::span<const double> samples() const noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }
    double operator[](std::size_t i) const noexcept { return samples_[i]; }

    bool operator==(const EmpiricalMeasure&) const = default;

private:
    struct Sorted {};
    EmpiricalMeasure(Sorted, std::vector<double> samples);

    std::vector<double> samples_;
};

/// Flow of empirical measures on a uniform time grid t0 = s_0 < ... < s_M.
class MeasureFlow {
public:
    MeasureFlow(double t0, double dt, std::vector<EmpiricalMeasure> slices);

    double t0() const noexcept { return t0_; }
    double dt() const noexcept { return dt_; }
    double terminal_time() const noexcept { return t0_ + dt_ * static_cast<double>(steps()); }
    std::size_t steps() const noexcept { return slices_.size() - 1; }
    std::size_t sample_count() const noexcept { return slices_.front().size(); }
    double time(std::size_t k) const noexcept { return t0_ + dt_ * static_cast<double>(k); }

    const EmpiricalMeasure& at(std::size_t k) const { return slices_.at(k); }
    const EmpiricalMeasure& terminal() const noexcept { return slices_.back(); }
    std::span<const EmpiricalMeasure> slices() const noexcept { return slices_; }

private:
    double t0_;
    double dt_;
    std::vector<EmpiricalMeasure> slices_;
};

double mean(const EmpiricalMeasure& mu);

/// W2 over order statistics. Throws MismatchError when sizes differ.
double wasserstein2(const EmpiricalMeasure& mu1, const EmpiricalMeasure& mu2);

/// mu1 ⪯ mu2 in first-order stochastic dominance. Throws MismatchError when
/// sizes differ.
bool dominates(const EmpiricalMeasure& mu1, const EmpiricalMeasure& mu2);

/// nu1_t ⪯ nu2_t at every grid time. Throws MismatchError on grid mismatch.
bool flow_dominates(const MeasureFlow& nu1, const MeasureFlow& nu2);

/// sup over grid times of W2 between matching slices.
double sup_wasserstein2(const MeasureFlow& nu1, const MeasureFlow& nu2);

/// Throws MismatchError unless both flows share t0, dt, step count and N.
void require_same_grid(const MeasureFlow& nu1, const MeasureFlow& nu2);

/// Inverse-CDF resampling at the quantile midpoints (i + 1/2) / n.
EmpiricalMeasure resample(const EmpiricalMeasure& mu, std::size_t n);

EmpiricalMeasure shifted(const EmpiricalMeasure& mu, double offset);

/// Deterministic N(mean, std^2) quantization at the quantile midpoints.
EmpiricalMeasure gaussian_quantiles(double mean, double stddev, std::size_t n);

/// Constant flow mu on the grid (t0, dt, steps).
MeasureFlow constant_flow(const EmpiricalMeasure& mu, double t0, double dt, std::size_t steps);

void write_measure_csv(std::ostream& os, const EmpiricalMeasure& mu);
EmpiricalMeasure read_measure_csv(std::istream& is);
void write_flow_csv(std::ostream& os, const MeasureFlow& nu);

}  // namespace mfgeq
