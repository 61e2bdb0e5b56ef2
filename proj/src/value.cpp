#include "mfgeq/value.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "mfgeq/csv.hpp"

namespace mfgeq {

PinnedNoise NoiseSpec::make(double horizon) const {
    if (!(horizon > 0.0)) throw std::invalid_argument("noise horizon must be positive");
    return PinnedNoise::generate(seed, particles, steps, horizon / static_cast<double>(steps), antithetic);
}

ValueSample value_from_traces(double x, const EmpiricalMeasure& mu, const PicardTrace& lower,
                              const PicardTrace& upper) {
    const double t = lower.grid().t0();
    return ValueSample{t,
                       x,
                       mean(mu),
                       eval_v(lower.grid(), t, x),
                       eval_v(upper.grid(), t, x),
                       eval_dxv(lower.grid(), t, x),
                       eval_dxv(upper.grid(), t, x),
                       lower.converged,
                       upper.converged};
}

ValueSample eval_value(const ProblemSpec& spec, double t, double T, double x, const EmpiricalMeasure& mu,
                       const PicardConfig& config, const NoiseSpec& noise) {
    if (!(t < T)) throw std::invalid_argument("eval_value: need t < T");
    const auto nz = noise.make(T - t);
    const auto lower = minimal_mfe(spec, t, mu, config, nz);
    const auto upper = maximal_mfe(spec, t, mu, config, nz);
    return value_from_traces(x, mu, lower, upper);
}

const char* to_string(ScanAxis a) { return a == ScanAxis::Mean ? "mean" : "time"; }

JumpReport locate_jump(ScanAxis axis, std::vector<ScanPoint> points, closedform::Selector sel, double threshold) {
    JumpReport rep;
    rep.axis = axis;
    rep.selector = sel;
    rep.points = std::move(points);
    const auto& pts = rep.points;
    if (pts.size() < 2) return rep;

    auto value = [sel](const ScanPoint& p) { return sel == closedform::Selector::Min ? p.dxv_min : p.dxv_max; };
    std::vector<double> diffs;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double d = std::abs(value(pts[i + 1]) - value(pts[i]));
        diffs.push_back(d);
        if (d > rep.jump) {
            rep.jump = d;
            rep.jump_index = i;
        }
    }
    if (threshold <= 0.0) {
        auto sorted = diffs;
        std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
        threshold = 10.0 * sorted[sorted.size() / 2];
    }
    rep.threshold = threshold;
    const auto& left = pts[rep.jump_index];
    const auto& right = pts[rep.jump_index + 1];
    rep.location = 0.5 * (left.axis_value + right.axis_value);
    rep.left_value = value(left);
    rep.right_value = value(right);
    rep.found = rep.jump > threshold;
    return rep;
}

JumpReport scan_discontinuity(const ProblemSpec& spec, const EmpiricalMeasure& mu, const ScanRequest& req,
                              const PicardConfig& config, const NoiseSpec& noise) {
    if (!(req.step > 0.0) || !(req.hi > req.lo)) throw std::invalid_argument("scan: need lo < hi and step > 0");
    const auto count = static_cast<std::size_t>(std::floor((req.hi - req.lo) / req.step + 1e-9)) + 1;
    if (req.axis == ScanAxis::Time && !(req.lo + req.step * static_cast<double>(count - 1) < req.T)) {
        throw std::invalid_argument("scan: time axis must stay below T");
    }
    const double base_mean = mean(mu);
    std::vector<ScanPoint> points;
    points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double a = req.lo + req.step * static_cast<double>(i);
        double t0 = req.t0;
        EmpiricalMeasure init = mu;
        if (req.axis == ScanAxis::Mean) {
            init = shifted(mu, a - base_mean);
        } else {
            t0 = a;
        }
        const auto nz = noise.make(req.T - t0);
        const auto lower = minimal_mfe(spec, t0, init, config, nz);
        const auto upper = maximal_mfe(spec, t0, init, config, nz);
        const auto s = value_from_traces(req.x, init, lower, upper);
        points.push_back({a, s.dxv_min, s.dxv_max, s.converged_min, s.converged_max});
    }
    return locate_jump(req.axis, std::move(points), req.selector, req.threshold);
}

void write_scan_csv(std::ostream& os, const JumpReport& report) {
    os << "axis_value,dxv_min,dxv_max,converged_min,converged_max\n";
    for (const auto& p : report.points) {
        csv::row(os, {csv::format(p.axis_value), csv::format(p.dxv_min), csv::format(p.dxv_max),
                      csv::cell(p.converged_min), csv::cell(p.converged_max)});
    }
}

void write_jump_csv(std::ostream& os, const JumpReport& report) {
    os << "axis,selector,location,left_value,right_value,jump,threshold,found\n";
    csv::row(os, {to_string(report.axis), report.selector == closedform::Selector::Min ? "min" : "max",
                  csv::format(report.location), csv::format(report.left_value), csv::format(report.right_value),
                  csv::format(report.jump), csv::format(report.threshold), csv::cell(report.found)});
}

void write_values_csv_header(std::ostream& os) {
    os << "t,x,mu_mean,v_min,v_max,dxv_min,dxv_max,converged_min,converged_max\n";
}

void write_values_csv_row(std::ostream& os, const ValueSample& s) {
    csv::row(os, {csv::format(s.t), csv::format(s.x), csv::format(s.mu_mean), csv::format(s.v_min),
                  csv::format(s.v_max), csv::format(s.dxv_min), csv::format(s.dxv_max), csv::cell(s.converged_min),
                  csv::cell(s.converged_max)});
}

}  // namespace mfgeq
