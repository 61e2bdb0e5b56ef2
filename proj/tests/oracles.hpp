#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance binary. Nothing here calls into the closed-form module.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "mfgeq/forward.hpp"
#include "mfgeq/measures.hpp"
#include "mfgeq/modelspec.hpp"

namespace oracle {

// Expanded-polynomial form of the saturating drift.
inline double bhat(double p) {
    if (p < -2.0) return -2.0;
    if (p < 0.0) return 2.0 * p + 0.5 * p * p;
    if (p < 2.0) return 2.0 * p - 0.5 * p * p;
    return 2.0;
}

inline double g(double lambda, double p) { return p - bhat(p) / lambda; }

inline double m2(double lambda) { return (lambda - 2.0) * (lambda - 2.0) / (2.0 * lambda); }

// Bisection for g(λ, p) = m on [a, b] with a sign change (or a at the root).
inline double bisect(double lambda, double m, double a, double b) {
    double fa = g(lambda, a) - m;
    if (fa == 0.0) return a;
    for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
        const double c = 0.5 * (a + b);
        const double fc = g(lambda, c) - m;
        if (fc == 0.0) return c;
        if ((fc < 0.0) == (fa < 0.0)) {
            a = c;
            fa = fc;
        } else {
            b = c;
        }
    }
    return 0.5 * (a + b);
}

// All roots of p = m + b̂(p)/λ for every m in the lattice m_lo + i·m_step,
// i < m_count, found by scanning sign changes of g - m on a fixed p grid
// (fine on [-4, 4], coarser on the linear tails) and bisecting.
inline std::vector<std::vector<double>> brute_roots(double lambda, double m_lo, double m_step, std::size_t m_count) {
    const double m_hi = m_lo + m_step * static_cast<double>(m_count - 1);
    const double reach = std::max(std::abs(m_lo), std::abs(m_hi)) + 2.0 / lambda + 1.0;

    std::vector<double> ps;
    for (double p = -reach; p < -4.0; p += 1e-2) ps.push_back(p);
    for (long i = -40000; i <= 40000; ++i) ps.push_back(static_cast<double>(i) * 1e-4);
    for (double p = 4.0 + 1e-2; p <= reach + 1e-2; p += 1e-2) ps.push_back(p);

    std::vector<std::vector<double>> roots(m_count);
    std::vector<double> gs(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) gs[i] = g(lambda, ps[i]);

    auto sign = [](double v) { return (v > 0.0) - (v < 0.0); };
    for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
        const double lo = std::min(gs[i], gs[i + 1]);
        const double hi = std::max(gs[i], gs[i + 1]);
        if (hi < m_lo || lo > m_hi) continue;
        const auto first = static_cast<long>(std::max(0.0, std::floor((lo - m_lo) / m_step) - 1.0));
        const auto last = std::min(static_cast<long>(m_count) - 1, static_cast<long>(std::ceil((hi - m_lo) / m_step)) + 1);
        for (long k = first; k <= last; ++k) {
            const double m = m_lo + m_step * static_cast<double>(k);
            const int sa = sign(gs[i] - m);
            const int sb = sign(gs[i + 1] - m);
            if (sa == 0 || sa * sb < 0) roots[static_cast<std::size_t>(k)].push_back(bisect(lambda, m, ps[i], ps[i + 1]));
        }
    }
    return roots;
}

// Stochastic-dominance test through the CDFs: μ ⪯ ν iff F_μ ≥ F_ν everywhere.
inline bool cdf_dominates(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> pts = a;
    pts.insert(pts.end(), b.begin(), b.end());
    for (double x : pts) {
        const auto ca = std::count_if(a.begin(), a.end(), [x](double v) { return v <= x; });
        const auto cb = std::count_if(b.begin(), b.end(), [x](double v) { return v <= x; });
        // Equal sizes, so the comparison of counts is the CDF comparison.
        if (ca < cb) return false;
    }
    return true;
}

// W₂ by minimising over all couplings that are permutations (N ≤ 4 here).
inline double brute_w2(std::vector<double> a, const std::vector<double>& b) {
    std::sort(a.begin(), a.end());
    double best = INFINITY;
    do {
        double acc = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
        best = std::min(best, acc);
    } while (std::next_permutation(a.begin(), a.end()));
    return std::sqrt(best / static_cast<double>(a.size()));
}

struct PropertyTally {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
};

// Random samples; half of the draws snap to a coarse grid so ties occur.
inline std::vector<double> random_samples(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> z;
    std::bernoulli_distribution snap(0.5);
    std::vector<double> out(n);
    const bool coarse = snap(rng);
    for (auto& x : out) {
        x = 2.0 * z(rng);
        if (coarse) x = std::round(x * 2.0) / 2.0;
    }
    return out;
}

// Sorted copy of `base` pushed up by random nonnegative amounts (some zero),
// so the result dominates `base`.
inline std::vector<double> push_up(std::mt19937_64& rng, std::vector<double> base) {
    std::sort(base.begin(), base.end());
    std::exponential_distribution<double> e(2.0);
    std::bernoulli_distribution zero(0.3);
    for (auto& x : base) x += zero(rng) ? 0.0 : e(rng);
    return base;
}

inline std::vector<PropertyTally> measure_properties(std::uint64_t seed, std::size_t cases) {
    using mfgeq::EmpiricalMeasure;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> size(1, 12);
    std::uniform_int_distribution<std::size_t> small(1, 4);
    PropertyTally refl{"dominance reflexive"}, anti{"dominance antisymmetric"}, trans{"dominance transitive"},
        cdf{"dominance matches CDF order"}, mono{"mean monotone under dominance"}, w2{"W2 equals brute force"},
        tri{"W2 triangle inequality"};

    for (std::size_t c = 0; c < cases; ++c) {
        const std::size_t n = size(rng);
        const auto a_raw = random_samples(rng, n);
        const EmpiricalMeasure a(a_raw);

        ++refl.cases;
        if (!mfgeq::dominates(a, a)) ++refl.failures;

        // Antisymmetry: either a pushed-up copy (equal only if nothing moved)
        // or an independent draw.
        {
            const auto b_raw = (c % 2 == 0) ? push_up(rng, a_raw) : random_samples(rng, n);
            const EmpiricalMeasure b(b_raw);
            ++anti.cases;
            if (mfgeq::dominates(a, b) && mfgeq::dominates(b, a) && !(a == b)) ++anti.failures;
            ++cdf.cases;
            if (mfgeq::dominates(a, b) != cdf_dominates(a_raw, b_raw)) ++cdf.failures;
        }
        {
            const auto b_raw = push_up(rng, a_raw);
            const auto c_raw = push_up(rng, b_raw);
            const EmpiricalMeasure b(b_raw), cc(c_raw);
            ++trans.cases;
            if (!(mfgeq::dominates(a, b) && mfgeq::dominates(b, cc) && mfgeq::dominates(a, cc))) ++trans.failures;
            ++mono.cases;
            if (!(mfgeq::mean(a) <= mfgeq::mean(b) && mfgeq::mean(b) <= mfgeq::mean(cc))) ++mono.failures;
        }
        {
            const std::size_t k = small(rng);
            const auto x = random_samples(rng, k);
            const auto y = random_samples(rng, k);
            ++w2.cases;
            const double fast = mfgeq::wasserstein2(EmpiricalMeasure(x), EmpiricalMeasure(y));
            const double slow = brute_w2(x, y);
            if (std::abs(fast - slow) > 1e-12 * std::max(1.0, slow)) ++w2.failures;
        }
        {
            const EmpiricalMeasure x(random_samples(rng, n)), y(random_samples(rng, n)), z(random_samples(rng, n));
            ++tri.cases;
            const double lhs = mfgeq::wasserstein2(x, z);
            const double rhs = mfgeq::wasserstein2(x, y) + mfgeq::wasserstein2(y, z);
            if (lhs > rhs * (1.0 + 1e-12) + 1e-15) ++tri.failures;
        }
    }
    return {refl, anti, trans, cdf, mono, w2, tri};
}

struct ComparisonTally {
    std::size_t scenarios = 0;
    std::size_t checks = 0;
    std::size_t violations = 0;
};

// Random ordered-drift SDE pairs under shared noise: b_lo ≤ b_hi pointwise,
// both nondecreasing in x, initial states ordered index-wise.
inline ComparisonTally sde_comparison(std::uint64_t seed, std::size_t scenarios) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> np(2, 60), mp(5, 120);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ComparisonTally tally;
    for (std::size_t s = 0; s < scenarios; ++s) {
        const std::size_t n = np(rng), steps = mp(rng);
        const double dt = (0.05 + u(rng)) / static_cast<double>(steps);
        const double slope = 0.2 + 2.0 * u(rng);
        const double tilt = u(rng);
        std::vector<double> shift_lo(steps), shift_hi(steps);
        for (std::size_t k = 0; k < steps; ++k) {
            shift_lo[k] = 4.0 * u(rng) - 2.0;
            shift_hi[k] = shift_lo[k] + (u(rng) < 0.2 ? 0.0 : u(rng));
        }
        auto lo_drift = [&](std::size_t k, double x) {
            return mfgeq::bhat_section8(slope * x + shift_lo[k]) + tilt * std::tanh(x);
        };
        auto hi_drift = [&](std::size_t k, double x) {
            return mfgeq::bhat_section8(slope * x + shift_hi[k]) + tilt * std::tanh(x);
        };
        const auto base = random_samples(rng, n);
        const mfgeq::EmpiricalMeasure xi_lo(base), xi_hi(push_up(rng, base));
        const auto noise = mfgeq::PinnedNoise::generate(rng(), n, steps, dt, s % 2 == 0);
        const auto lo = mfgeq::simulate_drift(xi_lo, noise, 0.0, lo_drift);
        const auto hi = mfgeq::simulate_drift(xi_hi, noise, 0.0, hi_drift);
        ++tally.scenarios;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k <= steps; ++k) {
                ++tally.checks;
                if (lo(i, k) > hi(i, k)) ++tally.violations;
            }
        }
    }
    return tally;
}

}  // namespace oracle
