#include "mfgeq/forward.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "mfgeq/csv.hpp"
#include "mfgeq/errors.hpp"

namespace mfgeq {

PinnedNoise::PinnedNoise(std::uint64_t seed, bool antithetic, std::size_t particles, std::size_t steps, double dt,
                         std::vector<double> increments)
    : seed_(seed),
      antithetic_(antithetic),
      particles_(particles),
      steps_(steps),
      dt_(dt),
      increments_(std::move(increments)) {
    if (particles_ == 0 || steps_ == 0) throw std::invalid_argument("pinned noise needs N >= 1 and M >= 1");
    if (!(dt_ > 0.0)) throw std::invalid_argument("pinned noise needs dt > 0");
    if (increments_.size() != particles_ * steps_) throw std::invalid_argument("pinned noise has the wrong size");
}

PinnedNoise PinnedNoise::generate(std::uint64_t seed, std::size_t particles, std::size_t steps, double dt,
                                  bool antithetic) {
    std::vector<double> inc(particles * steps);
    const double scale = std::sqrt(dt);
    const std::size_t drawn = antithetic ? (particles + 1) / 2 : particles;
    for (std::size_t i = 0; i < drawn; ++i) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(std::uint64_t(i) >> 32)};
        std::mt19937_64 gen(seq);
        std::normal_distribution<double> normal;
        for (std::size_t k = 0; k < steps; ++k) inc[i * steps + k] = scale * normal(gen);
    }
    if (antithetic) {
        for (std::size_t i = drawn; i < particles; ++i) {
            const std::size_t twin = i - drawn;
            for (std::size_t k = 0; k < steps; ++k) inc[i * steps + k] = -inc[twin * steps + k];
        }
    }
    return PinnedNoise(seed, antithetic, particles, steps, dt, std::move(inc));
}

PinnedNoise PinnedNoise::zero(std::size_t particles, std::size_t steps, double dt) {
    return PinnedNoise(0, false, particles, steps, dt, std::vector<double>(particles * steps, 0.0));
}

PinnedNoise PinnedNoise::from_increments(std::size_t particles, std::size_t steps, double dt,
                                         std::vector<double> increments) {
    return PinnedNoise(0, false, particles, steps, dt, std::move(increments));
}

ParticleEnsemble::ParticleEnsemble(double t0, double dt, std::size_t particles, std::size_t steps,
                                   std::vector<double> paths)
    : t0_(t0), dt_(dt), particles_(particles), steps_(steps), paths_(std::move(paths)) {
    if (paths_.size() != particles_ * (steps_ + 1)) throw std::invalid_argument("particle ensemble has the wrong size");
}

ParticleEnsemble simulate_drift(const EmpiricalMeasure& init, const PinnedNoise& noise, double t0,
                                const DriftFn& drift) {
    if (init.size() != noise.particles()) {
        throw MismatchError("simulate: initial measure has " + std::to_string(init.size()) +
                            " samples but the noise has " + std::to_string(noise.particles()) + " particles");
    }
    const std::size_t n = noise.particles();
    const std::size_t m = noise.steps();
    const double dt = noise.dt();
    std::vector<double> paths(n * (m + 1));
    for (std::size_t i = 0; i < n; ++i) {
        double* path = &paths[i * (m + 1)];
        const auto db = noise.row(i);
        double x = init[i];
        path[0] = x;
        for (std::size_t k = 0; k < m; ++k) {
            const double b = drift(k, x);
            if (!std::isfinite(b)) {
                std::ostringstream msg;
                msg << "simulate: non-finite drift for particle " << i << " at step " << k << " (x=" << x << ")";
                throw NumericalError(msg.str());
            }
            x = x + b * dt + db[k];
            path[k + 1] = x;
        }
    }
    return ParticleEnsemble(t0, dt, n, m, std::move(paths));
}

ParticleEnsemble simulate(const ProblemSpec& spec, const GridFunction& gf, const MeasureFlow& nu,
                          const EmpiricalMeasure& init, const PinnedNoise& noise) {
    if (gf.steps() != noise.steps() || nu.steps() != noise.steps() || gf.t0() != nu.t0() || gf.dt() != nu.dt() ||
        nu.dt() != noise.dt()) {
        std::ostringstream msg;
        msg << "simulate: grids misaligned (value grid t0=" << gf.t0() << " dt=" << gf.dt() << " M=" << gf.steps()
            << "; flow t0=" << nu.t0() << " dt=" << nu.dt() << " M=" << nu.steps() << "; noise dt=" << noise.dt()
            << " M=" << noise.steps() << ")";
        throw MismatchError(msg.str());
    }
    return simulate_drift(init, noise, nu.t0(), [&](std::size_t k, double x) {
        return spec.bhat(x, gf.dxv_row(k, x), nu.at(k));
    });
}

ParticleEnsemble simulate_constant_drift(const EmpiricalMeasure& init, const PinnedNoise& noise, double t0,
                                         double drift) {
    return simulate_drift(init, noise, t0, [drift](std::size_t, double) { return drift; });
}

MeasureFlow pushforward(const ParticleEnsemble& ens) {
    const std::size_t n = ens.particles();
    std::vector<EmpiricalMeasure> slices;
    slices.reserve(ens.steps() + 1);
    std::vector<double> buf(n);
    for (std::size_t k = 0; k <= ens.steps(); ++k) {
        for (std::size_t i = 0; i < n; ++i) buf[i] = ens(i, k);
        std::sort(buf.begin(), buf.end());
        slices.push_back(EmpiricalMeasure::from_sorted(buf));
    }
    return MeasureFlow(ens.t0(), ens.dt(), std::move(slices));
}

std::optional<OrderViolation> first_order_violation(const ParticleEnsemble& lower, const ParticleEnsemble& upper) {
    if (lower.particles() != upper.particles() || lower.steps() != upper.steps()) {
        throw MismatchError("order audit: ensembles have different shapes");
    }
    for (std::size_t k = 0; k <= lower.steps(); ++k) {
        for (std::size_t i = 0; i < lower.particles(); ++i) {
            if (lower(i, k) > upper(i, k)) return OrderViolation{i, k, lower(i, k), upper(i, k)};
        }
    }
    return std::nullopt;
}

void write_ensemble_csv(std::ostream& os, const ParticleEnsemble& ens) {
    os << "particle,time_index,value\n";
    for (std::size_t i = 0; i < ens.particles(); ++i) {
        for (std::size_t k = 0; k <= ens.steps(); ++k) os << i << ',' << k << ',' << csv::format(ens(i, k)) << '\n';
    }
}

}  // namespace mfgeq
