#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "mfgeq/hjb.hpp"
#include "mfgeq/measures.hpp"
#include "mfgeq/modelspec.hpp"

namespace mfgeq {

/// Brownian increments drawn once per scenario and reused by every
/// simulation of that scenario (common random numbers).
class PinnedNoise {
public:
    /// Particle i draws from its own generator seeded by (seed, i), so the
    /// increments do not depend on evaluation order. With `antithetic`,
    /// particle i + ceil(N/2) reuses the negated increments of particle i.
    static PinnedNoise generate(std::uint64_t seed, std::size_t particles, std::size_t steps, double dt,
                                bool antithetic = true);
    static PinnedNoise zero(std::size_t particles, std::size_t steps, double dt);
    /// Row-major particles × steps.
    static PinnedNoise from_increments(std::size_t particles, std::size_t steps, double dt,
                                       std::vector<double> increments);

    std::uint64_t seed() const noexcept { return seed_; }
    bool antithetic() const noexcept { return antithetic_; }
    std::size_t particles() const noexcept { return particles_; }
    std::size_t steps() const noexcept { return steps_; }
    double dt() const noexcept { return dt_; }

    double operator()(std::size_t i, std::size_t k) const noexcept { return increments_[i * steps_ + k]; }
    std::span<const double> row(std::size_t i) const noexcept { return {&increments_[i * steps_], steps_}; }

private:
    PinnedNoise(std::uint64_t seed, bool antithetic, std::size_t particles, std::size_t steps, double dt,
                std::vector<double> increments);

    std::uint64_t seed_;
    bool antithetic_;
    std::size_t particles_;
    std::size_t steps_;
    double dt_;
    std::vector<double> increments_;
};

/// N particle paths on a uniform grid; row-major particles × (M + 1).
class ParticleEnsemble {
public:
    ParticleEnsemble(double t0, double dt, std::size_t particles, std::size_t steps, std::vector<double> paths);

    double t0() const noexcept { return t0_; }
    double dt() const noexcept { return dt_; }
    std::size_t particles() const noexcept { return particles_; }
    std::size_t steps() const noexcept { return steps_; }

    double operator()(std::size_t i, std::size_t k) const noexcept { return paths_[i * (steps_ + 1) + k]; }
    std::span<const double> path(std::size_t i) const noexcept { return {&paths_[i * (steps_ + 1)], steps_ + 1}; }

private:
    double t0_;
    double dt_;
    std::size_t particles_;
    std::size_t steps_;
    std::vector<double> paths_;
};

/// Drift evaluated at (time index, state).
using DriftFn = std::function<double(std::size_t k, double x)>;

/// Euler–Maruyama x_{k+1} = x_k + drift(k, x_k) dt + ΔB_{i,k}, particle i
/// starting from the i-th order statistic of `init`. Throws NumericalError
/// naming the particle and step on a non-finite drift.
ParticleEnsemble simulate_drift(const EmpiricalMeasure& init, const PinnedNoise& noise, double t0,
                                const DriftFn& drift);

/// Controlled SDE with drift b̂(x, ∂ₓv(s_k, x), ν_{s_k}). Throws MismatchError
/// unless gf, nu and noise share one time grid and init has noise's N.
ParticleEnsemble simulate(const ProblemSpec& spec, const GridFunction& gf, const MeasureFlow& nu,
                          const EmpiricalMeasure& init, const PinnedNoise& noise);

/// ξ + c (t - t0) + B_t; the extreme Picard seeds use c = ∓L.
ParticleEnsemble simulate_constant_drift(const EmpiricalMeasure& init, const PinnedNoise& noise, double t0,
                                         double drift);

/// Sorts every time slice into an empirical measure.
MeasureFlow pushforward(const ParticleEnsemble& ens);

struct OrderViolation {
    std::size_t particle;
    std::size_t step;
    double lower;
    double upper;
};

/// First (particle, step) where lower(i, k) > upper(i, k), if any.
std::optional<OrderViolation> first_order_violation(const ParticleEnsemble& lower, const ParticleEnsemble& upper);

void write_ensemble_csv(std::ostream& os, const ParticleEnsemble& ens);

}  // namespace mfgeq
