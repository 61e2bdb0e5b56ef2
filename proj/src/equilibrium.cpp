#include "mfgeq/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "mfgeq/csv.hpp"
#include "mfgeq/errors.hpp"

namespace mfgeq {

const char* to_string(Direction d) {
    switch (d) {
        case Direction::FromBelow: return "from-below";
        case Direction::FromAbove: return "from-above";
        case Direction::Probe: return "probe";
    }
    return "?";
}

NashFieldResult nash_field_full(const ProblemSpec& spec, const EmpiricalMeasure& mu, const MeasureFlow& nu,
                                const PinnedNoise& noise, const GridConfig& grid) {
    auto gf = solve_hjb(spec, nu, grid);
    auto paths = simulate(spec, gf, nu, mu, noise);
    auto flow = pushforward(paths);
    return {std::move(gf), std::move(paths), std::move(flow)};
}

MeasureFlow nash_field(const ProblemSpec& spec, const EmpiricalMeasure& mu, const MeasureFlow& nu,
                       const PinnedNoise& noise, const GridConfig& grid) {
    return nash_field_full(spec, mu, nu, noise, grid).flow;
}

double mfe_residual(const ProblemSpec& spec, const EmpiricalMeasure& mu, const MeasureFlow& nu,
                    const PinnedNoise& noise, const GridConfig& grid) {
    return sup_wasserstein2(nash_field(spec, mu, nu, noise, grid), nu);
}

namespace {

double seed_offset(const ProblemSpec& spec, const PicardConfig& config) {
    return config.drift_bound < 0.0 ? spec.drift_bound : config.drift_bound;
}

}  // namespace

GridConfig picard_grid(const ProblemSpec& spec, const EmpiricalMeasure& mu, double horizon,
                       const PicardConfig& config) {
    return grid_for(mu, horizon, seed_offset(spec, config), config.space_intervals, config.c1, config.c2);
}

namespace {

void audit_step(Direction dir, std::size_t iteration, const ParticleEnsemble& previous,
                const ParticleEnsemble& next, const MeasureFlow& previous_flow, const MeasureFlow& next_flow,
                PicardTrace& trace) {
    if (dir == Direction::Probe) return;
    const bool below = dir == Direction::FromBelow;
    const auto& lo = below ? previous : next;
    const auto& hi = below ? next : previous;
    if (auto v = first_order_violation(lo, hi)) {
        std::ostringstream msg;
        msg << to_string(dir) << " iteration " << iteration << ", step " << v->step << ", particle " << v->particle
            << ": " << v->lower << " > " << v->upper;
        throw AuditError("monotone iteration", msg.str());
    }
    trace.audited_pairs += lo.particles() * (lo.steps() + 1);
    const bool ordered = below ? flow_dominates(previous_flow, next_flow) : flow_dominates(next_flow, previous_flow);
    if (!ordered) {
        throw AuditError("monotone iteration",
                         std::string(to_string(dir)) + " iteration " + std::to_string(iteration) +
                             ": successive flows not ordered");
    }
}

bool plateaued(const std::vector<double>& r, const PicardConfig& config) {
    const std::size_t w = config.stall_window;
    if (w == 0 || r.size() <= w) return false;
    const std::size_t last = r.size() - 1;
    for (std::size_t i = last - w + 1; i <= last; ++i) {
        if (r[i] > r[i - 1]) return false;
    }
    const double old = r[last - w];
    return old - r[last] < config.stall_rel * old;
}

PicardTrace run_picard(const ProblemSpec& spec, double t0, const EmpiricalMeasure& mu, const PicardConfig& config,
                       const PinnedNoise& noise, Direction dir, double seed_drift) {
    if (mu.size() != noise.particles()) {
        throw MismatchError("picard: initial measure has " + std::to_string(mu.size()) + " samples, noise has " +
                            std::to_string(noise.particles()) + " particles");
    }
    if (!(config.tau_picard > 0.0) || !(config.tau_mfe > 0.0)) {
        throw std::invalid_argument("picard: tolerances must be positive");
    }
    const double horizon = noise.dt() * static_cast<double>(noise.steps());
    const GridConfig grid = picard_grid(spec, mu, horizon, config);

    PicardTrace trace;
    trace.direction = dir;

    auto prev_paths = simulate_constant_drift(mu, noise, t0, seed_drift);
    auto prev_flow = pushforward(prev_paths);
    trace.mean_at_T.push_back(mean(prev_flow.terminal()));

    for (std::size_t n = 0; n < config.max_iter; ++n) {
        auto step = nash_field_full(spec, mu, prev_flow, noise, grid);
        audit_step(dir, n + 1, prev_paths, step.paths, prev_flow, step.flow, trace);
        const double r = sup_wasserstein2(prev_flow, step.flow);
        if (!std::isfinite(r)) throw NumericalError("picard: non-finite residual at iteration " + std::to_string(n + 1));

        if (config.keep_iterates) trace.iterates.push_back({std::move(prev_flow), std::move(step.grid)});
        trace.residuals.push_back(r);
        trace.mean_at_T.push_back(mean(step.flow.terminal()));
        trace.iterations_used = n + 1;
        prev_flow = std::move(step.flow);
        prev_paths = std::move(step.paths);

        if (r <= config.tau_picard) {
            trace.converged = true;
            break;
        }
        if (plateaued(trace.residuals, config)) {
            trace.stalled = true;
            break;
        }
    }

    auto check = nash_field_full(spec, mu, prev_flow, noise, grid);
    trace.mfe_residual = sup_wasserstein2(check.flow, prev_flow);
    audit_step(dir, trace.iterations_used + 1, prev_paths, check.paths, prev_flow, check.flow, trace);

    if (config.keep_iterates) trace.iterates.push_back({prev_flow, check.grid});
    trace.final_grid.emplace(std::move(check.grid));
    trace.final_flow.emplace(std::move(prev_flow));
    trace.final_paths.emplace(std::move(prev_paths));
    return trace;
}

}  // namespace

PicardTrace minimal_mfe(const ProblemSpec& spec, double t0, const EmpiricalMeasure& mu, const PicardConfig& config,
                        const PinnedNoise& noise) {
    return run_picard(spec, t0, mu, config, noise, Direction::FromBelow, -seed_offset(spec, config));
}

PicardTrace maximal_mfe(const ProblemSpec& spec, double t0, const EmpiricalMeasure& mu, const PicardConfig& config,
                        const PinnedNoise& noise) {
    return run_picard(spec, t0, mu, config, noise, Direction::FromAbove, seed_offset(spec, config));
}

PicardTrace probe_mfe(const ProblemSpec& spec, double t0, const EmpiricalMeasure& mu, const PicardConfig& config,
                      const PinnedNoise& noise, double seed_drift) {
    return run_picard(spec, t0, mu, config, noise, Direction::Probe, seed_drift);
}

FlowPropertyReport flow_property_check(const ProblemSpec& spec, double t0, std::size_t restart_index,
                                       const EmpiricalMeasure& mu, const PicardConfig& config,
                                       const PinnedNoise& noise, std::uint64_t restart_seed, Direction direction) {
    if (direction == Direction::Probe) throw std::invalid_argument("flow_property_check: direction must be extreme");
    if (restart_index >= noise.steps()) {
        throw std::invalid_argument("flow_property_check: restart time must be strictly before T");
    }
    auto run = [&](double start, const EmpiricalMeasure& init, const PinnedNoise& nz) {
        return direction == Direction::FromBelow ? minimal_mfe(spec, start, init, config, nz)
                                                 : maximal_mfe(spec, start, init, config, nz);
    };

    const auto original = run(t0, mu, noise);
    const auto& flow = original.flow();
    FlowPropertyReport rep{t0, flow.time(restart_index), restart_index, {}, {}, 0.0, original.converged, true};
    if (restart_index == 0) {
        for (std::size_t k = 0; k <= flow.steps(); ++k) {
            rep.times.push_back(flow.time(k));
            rep.w2.push_back(0.0);
        }
        return rep;
    }

    const std::size_t rest_steps = noise.steps() - restart_index;
    const auto fresh = PinnedNoise::generate(restart_seed, noise.particles(), rest_steps, noise.dt(), noise.antithetic());
    const auto restarted = run(rep.t1, flow.at(restart_index), fresh);
    rep.restart_converged = restarted.converged;
    for (std::size_t j = 0; j <= rest_steps; ++j) {
        const double d = wasserstein2(flow.at(restart_index + j), restarted.flow().at(j));
        rep.times.push_back(flow.time(restart_index + j));
        rep.w2.push_back(d);
        rep.discrepancy = std::max(rep.discrepancy, d);
    }
    return rep;
}

void write_trace_csv(std::ostream& os, const PicardTrace& trace) {
    os << "iteration,residual,mean_at_T\n";
    for (std::size_t n = 0; n < trace.mean_at_T.size(); ++n) {
        const std::string r = n == 0 ? std::string() : csv::format(trace.residuals[n - 1]);
        csv::row(os, {std::to_string(n), r, csv::format(trace.mean_at_T[n])});
    }
}

void write_flow_report_csv(std::ostream& os, const FlowPropertyReport& report) {
    os << "time,w2\n";
    for (std::size_t i = 0; i < report.times.size(); ++i) {
        csv::row(os, {csv::format(report.times[i]), csv::format(report.w2[i])});
    }
}

}  // namespace mfgeq
