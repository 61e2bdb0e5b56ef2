#include "mfgeq/scenario.hpp"

#include <boost/version.hpp>

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "mfgeq/closedform.hpp"
#include "mfgeq/csv.hpp"
#include "mfgeq/errors.hpp"

#ifndef MFGEQ_VERSION
#define MFGEQ_VERSION "0.0.0"
#endif

namespace mfgeq {

const char* version() noexcept { return MFGEQ_VERSION; }

namespace {

namespace fs = std::filesystem;
namespace cf = closedform;

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

void close_checked(std::ofstream& out, const fs::path& path) {
    out.close();
    if (!out) throw IoError("failed writing " + path.string());
}

template <class Fn>
void write_file(const fs::path& path, Fn&& fn) {
    auto out = open_out(path);
    fn(out);
    close_checked(out, path);
}

std::string build_info() {
    std::ostringstream os;
    os << "# mfgeq " << version() << '\n';
#if defined(__clang__)
    os << "# compiler clang " << __clang_major__ << '.' << __clang_minor__ << '.' << __clang_patchlevel__ << '\n';
#elif defined(__GNUC__)
    os << "# compiler gcc " << __GNUC__ << '.' << __GNUC_MINOR__ << '.' << __GNUC_PATCHLEVEL__ << '\n';
#endif
    os << "# boost " << BOOST_VERSION / 100000 << '.' << BOOST_VERSION / 100 % 1000 << '.' << BOOST_VERSION % 100
       << '\n';
    return os.str();
}

std::vector<double> lattice(double lo, double hi, double step) {
    if (!(step > 0.0) || hi < lo) throw std::invalid_argument("lattice: need lo <= hi and step > 0");
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    std::vector<double> out;
    out.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) out.push_back(lo + step * static_cast<double>(i));
    return out;
}

void audit_sandwich(const PicardTrace& lower, const PicardTrace& upper) {
    if (!flow_dominates(lower.flow(), upper.flow())) {
        throw AuditError("sandwich", "minimal flow is not dominated by the maximal flow");
    }
}

PicardConfig with_grid(PicardConfig p, std::size_t j) {
    p.space_intervals = j;
    return p;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg, std::ostream& log) {
    const auto spec = make_problem(cfg.problem, cfg.problem_params);
    const auto mu = cfg.initial_measure();
    ensure_dir(cfg.out_dir);
    write_file(cfg.out_dir / "run_metadata.txt", [&](std::ostream& os) { os << build_info() << cfg.to_text(); });

    ScenarioResult res;
    res.lint = lint_assumptions(spec);
    write_file(cfg.out_dir / "lint.csv", [&](std::ostream& os) { write_lint_csv(os, res.lint); });
    if (!res.lint.all_pass()) {
        for (const auto& e : res.lint.entries) {
            if (!e.pass) throw AuditError("assumption lint", e.assumption + " at " + e.probe);
        }
    }
    log << "lint: " << res.lint.entries.size() << " probes passed\n";

    const auto noise = cfg.noise().make(cfg.horizon());
    res.lower = minimal_mfe(spec, cfg.t0, mu, cfg.picard, noise);
    log << "minimal: " << res.lower.iterations_used << " iterations, residual "
        << (res.lower.residuals.empty() ? 0.0 : res.lower.residuals.back()) << ", m(T) = "
        << res.lower.mean_at_T.back() << '\n';
    res.upper = maximal_mfe(spec, cfg.t0, mu, cfg.picard, noise);
    log << "maximal: " << res.upper.iterations_used << " iterations, residual "
        << (res.upper.residuals.empty() ? 0.0 : res.upper.residuals.back()) << ", m(T) = "
        << res.upper.mean_at_T.back() << '\n';
    write_file(cfg.out_dir / "trace_min.csv", [&](std::ostream& os) { write_trace_csv(os, res.lower); });
    write_file(cfg.out_dir / "trace_max.csv", [&](std::ostream& os) { write_trace_csv(os, res.upper); });
    audit_sandwich(res.lower, res.upper);

    for (double x : cfg.probes_x) {
        const auto s = value_from_traces(x, mu, res.lower, res.upper);
        if (s.dxv_min > s.dxv_max) {
            throw AuditError("selector order", "dxv_min > dxv_max at x = " + csv::format(x));
        }
        res.values.push_back(s);
    }
    write_file(cfg.out_dir / "values.csv", [&](std::ostream& os) {
        write_values_csv_header(os);
        for (const auto& s : res.values) write_values_csv_row(os, s);
    });

    const double m0 = mean(mu);
    const double lambda = 1.0 / cfg.horizon();
    if (cfg.problem == "section8") {
        res.p_min_closed = cf::minimal_p(lambda, m0);
        res.p_max_closed = cf::maximal_p(lambda, m0);
    }
    write_file(cfg.out_dir / "summary.csv", [&](std::ostream& os) {
        os << "selector,mean_mu,lambda,p_num,p_closed,converged,stalled,iterations,mfe_residual,audited_pairs\n";
        auto line = [&](const char* sel, const PicardTrace& tr, const std::optional<double>& closed) {
            csv::row(os, {sel, csv::format(m0), csv::format(lambda), csv::format(tr.mean_at_T.back()),
                          closed ? csv::format(*closed) : std::string(), csv::cell(tr.converged),
                          csv::cell(tr.stalled), csv::cell(tr.iterations_used), csv::format(tr.mfe_residual),
                          csv::cell(tr.audited_pairs)});
        };
        line("min", res.lower, res.p_min_closed);
        line("max", res.upper, res.p_max_closed);
    });
    return res;
}

ComparisonRow compare_section8(double lambda, double m, const Section8Options& opt) {
    const auto spec = make_problem("section8");
    const double horizon = 1.0 / lambda;
    const auto mu = gaussian_quantiles(m, opt.init_std, opt.particles);
    const auto noise = PinnedNoise::generate(opt.seed, opt.particles, opt.time_steps,
                                             horizon / static_cast<double>(opt.time_steps));
    const auto cfg = with_grid(PicardConfig{}, opt.space_intervals);
    const auto lower = minimal_mfe(spec, 0.0, mu, cfg, noise);
    const auto upper = maximal_mfe(spec, 0.0, mu, cfg, noise);
    return ComparisonRow{lambda,
                         m,
                         cf::minimal_p(lambda, m),
                         cf::maximal_p(lambda, m),
                         lower.mean_at_T.back(),
                         upper.mean_at_T.back(),
                         lower.converged,
                         upper.converged,
                         lower.iterations_used,
                         upper.iterations_used,
                         lower.audited_pairs + upper.audited_pairs,
                         flow_dominates(lower.flow(), upper.flow())};
}

Section8Result run_section8_suite(const fs::path& out_dir, const Section8Options& opt, std::ostream& log) {
    ensure_dir(out_dir);
    Section8Result res;

    write_file(out_dir / "phase_diagram.csv", [&](std::ostream& os) {
        os << "lambda,m,case,n_roots,root1,root2,root3,p_min,p_max,three_root_region\n";
        for (double lambda : lattice(opt.lambda_lo, opt.lambda_hi, opt.lambda_step)) {
            for (double m : lattice(opt.m_lo, opt.m_hi, opt.m_step)) {
                const auto rs = cf::solve_roots(lambda, m);
                const bool region = lambda < 2.0 && std::abs(m) < cf::m2(lambda);
                const bool boundary = std::abs(std::abs(m) - cf::m2(lambda)) <= cf::kBoundaryBand;
                ++res.lattice_points;
                if (rs.size() == 3) ++res.three_root_points;
                if (!boundary && (rs.size() == 3) != region) ++res.region_mismatches;
                std::vector<std::string> cells{csv::format(lambda), csv::format(m),
                                               std::string(cf::to_string(rs.scalar_case.label)),
                                               csv::cell(rs.size())};
                for (std::size_t i = 0; i < 3; ++i) {
                    cells.push_back(i < rs.size() ? csv::format(rs.roots[i].value) : std::string());
                }
                cells.push_back(csv::format(rs.p_min()));
                cells.push_back(csv::format(rs.p_max()));
                cells.push_back(csv::cell(region));
                for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
                os << '\n';
            }
        }
    });
    log << "phase diagram: " << res.lattice_points << " points, " << res.three_root_points << " with three roots, "
        << res.region_mismatches << " region mismatches\n";

    // The minimal selector jumps upward crossing m = m₂, the maximal one
    // downward crossing m = -m₂. Along t the jump sits where m₂(λ) = m.
    for (double lambda : {1.2, 1.4, 1.6, 1.8}) {
        const double mm = cf::m2(lambda);
        res.discontinuities.push_back({"m", lambda, mm, cf::Selector::Min,
                                       cf::selector_limit_m(cf::Selector::Min, lambda, mm, cf::Side::Below),
                                       cf::selector_limit_m(cf::Selector::Min, lambda, mm, cf::Side::Above)});
        res.discontinuities.push_back({"m", lambda, -mm, cf::Selector::Max,
                                       cf::selector_limit_m(cf::Selector::Max, lambda, -mm, cf::Side::Below),
                                       cf::selector_limit_m(cf::Selector::Max, lambda, -mm, cf::Side::Above)});
    }
    res.discontinuities.push_back({"lambda", 1.6, 0.05, cf::Selector::Min,
                                   cf::selector_limit_lambda(cf::Selector::Min, 1.6, 0.05, cf::Side::Below),
                                   cf::selector_limit_lambda(cf::Selector::Min, 1.6, 0.05, cf::Side::Above)});
    write_file(out_dir / "discontinuity.csv", [&](std::ostream& os) {
        os << "axis,lambda,m,selector,left,right,jump\n";
        for (const auto& d : res.discontinuities) {
            csv::row(os, {d.axis, csv::format(d.lambda), csv::format(d.m), d.selector == cf::Selector::Min ? "min" : "max",
                          csv::format(d.left), csv::format(d.right), csv::format(d.right - d.left)});
        }
    });

    if (!opt.run_numeric) return res;
    for (double lambda : opt.compare_lambdas) {
        for (double m : opt.compare_means) {
            auto row = compare_section8(lambda, m, opt);
            res.max_err_min = std::max(res.max_err_min, std::abs(row.p_min_num - row.p_min_closed));
            res.max_err_max = std::max(res.max_err_max, std::abs(row.p_max_num - row.p_max_closed));
            log << "lambda " << lambda << " m " << m << ": min " << row.p_min_num << " (closed " << row.p_min_closed
                << "), max " << row.p_max_num << " (closed " << row.p_max_closed << ")\n";
            res.comparison.push_back(row);
        }
    }
    write_file(out_dir / "comparison.csv", [&](std::ostream& os) {
        os << "lambda,m,p_min_closed,p_max_closed,p_min_num,p_max_num,err_min,err_max,converged_min,converged_max,"
              "iterations_min,iterations_max,audited_pairs,sandwich\n";
        for (const auto& r : res.comparison) {
            csv::row(os, {csv::format(r.lambda), csv::format(r.m), csv::format(r.p_min_closed),
                          csv::format(r.p_max_closed), csv::format(r.p_min_num), csv::format(r.p_max_num),
                          csv::format(std::abs(r.p_min_num - r.p_min_closed)),
                          csv::format(std::abs(r.p_max_num - r.p_max_closed)), csv::cell(r.converged_min),
                          csv::cell(r.converged_max), csv::cell(r.iterations_min), csv::cell(r.iterations_max),
                          csv::cell(r.audited_pairs), csv::cell(r.sandwich)});
        }
    });
    for (const auto& r : res.comparison) {
        if (!r.sandwich) {
            throw AuditError("sandwich", "lambda " + csv::format(r.lambda) + ", m " + csv::format(r.m));
        }
    }
    return res;
}

FlowCheckResult run_flow_check(const ScenarioConfig& cfg, double t1, std::ostream& log) {
    const auto spec = make_problem(cfg.problem, cfg.problem_params);
    const auto mu = cfg.initial_measure();
    const auto ns = cfg.noise();
    const double dt = cfg.horizon() / static_cast<double>(ns.steps);
    const double steps = (t1 - cfg.t0) / dt;
    const double k = std::round(steps);
    if (std::abs(steps - k) > 1e-9 * std::max(1.0, steps) || k < 0.0 || k >= static_cast<double>(ns.steps)) {
        throw ConfigError("t1", 0, "t1 must be a grid time in [t0, T)");
    }
    ensure_dir(cfg.out_dir);
    write_file(cfg.out_dir / "run_metadata.txt",
               [&](std::ostream& os) { os << build_info() << "# flowcheck t1 = " << csv::format(t1) << '\n' << cfg.to_text(); });

    const auto noise = ns.make(cfg.horizon());
    FlowCheckResult res;
    res.report = flow_property_check(spec, cfg.t0, static_cast<std::size_t>(k), mu, cfg.picard, noise, cfg.seed + 1,
                                     Direction::FromBelow);

    auto replica_ns = ns;
    replica_ns.seed = cfg.seed + 2;
    const auto replica = minimal_mfe(spec, cfg.t0, mu, cfg.picard, replica_ns.make(cfg.horizon()));
    const auto original = minimal_mfe(spec, cfg.t0, mu, cfg.picard, noise);
    res.noise_floor = sup_wasserstein2(original.flow(), replica.flow());
    res.tau_flow = 3.0 * res.noise_floor;
    res.pass = res.report.discrepancy <= res.tau_flow;
    log << "flow property at t1 = " << t1 << ": discrepancy " << res.report.discrepancy << ", tau_flow "
        << res.tau_flow << (res.pass ? " (pass)\n" : " (FAIL)\n");

    write_file(cfg.out_dir / "flow_check.csv", [&](std::ostream& os) { write_flow_report_csv(os, res.report); });
    write_file(cfg.out_dir / "flow_summary.csv", [&](std::ostream& os) {
        os << "t0,t1,discrepancy,noise_floor,tau_flow,original_converged,restart_converged,pass\n";
        csv::row(os, {csv::format(res.report.t0), csv::format(res.report.t1), csv::format(res.report.discrepancy),
                      csv::format(res.noise_floor), csv::format(res.tau_flow), csv::cell(res.report.original_converged),
                      csv::cell(res.report.restart_converged), csv::cell(res.pass)});
    });
    if (!res.pass) {
        throw AuditError("flow property", "discrepancy " + csv::format(res.report.discrepancy) + " exceeds tau_flow " +
                                              csv::format(res.tau_flow));
    }
    return res;
}

JumpReport run_scan(const ScenarioConfig& cfg, ScanAxis axis, double lo, double hi, double step,
                    cf::Selector selector, std::ostream& log) {
    const auto spec = make_problem(cfg.problem, cfg.problem_params);
    const auto mu = cfg.initial_measure();
    ScanRequest req;
    req.axis = axis;
    req.lo = lo;
    req.hi = hi;
    req.step = step;
    req.t0 = cfg.t0;
    req.T = cfg.T;
    req.x = cfg.probes_x.front();
    req.selector = selector;
    ensure_dir(cfg.out_dir);
    write_file(cfg.out_dir / "run_metadata.txt", [&](std::ostream& os) {
        os << build_info() << "# scan " << to_string(axis) << ' ' << csv::format(lo) << ' ' << csv::format(hi) << ' '
           << csv::format(step) << '\n'
           << cfg.to_text();
    });

    auto rep = scan_discontinuity(spec, mu, req, cfg.picard, cfg.noise());
    log << "scan " << to_string(axis) << ": largest jump " << rep.jump << " at " << rep.location
        << (rep.found ? " (above threshold)\n" : " (below threshold)\n");
    write_file(cfg.out_dir / "scan.csv", [&](std::ostream& os) { write_scan_csv(os, rep); });
    write_file(cfg.out_dir / "jump.csv", [&](std::ostream& os) { write_jump_csv(os, rep); });
    if (cfg.problem == "section8") {
        const double m0 = mean(mu);
        write_file(cfg.out_dir / "scan_oracle.csv", [&](std::ostream& os) {
            os << "axis_value,lambda,m,p_min,p_max\n";
            for (const auto& p : rep.points) {
                const double lambda = axis == ScanAxis::Time ? 1.0 / (cfg.T - p.axis_value) : 1.0 / cfg.horizon();
                const double m = axis == ScanAxis::Mean ? p.axis_value : m0;
                csv::row(os, {csv::format(p.axis_value), csv::format(lambda), csv::format(m),
                              csv::format(cf::minimal_p(lambda, m)), csv::format(cf::maximal_p(lambda, m))});
            }
        });
    }
    return rep;
}

}  // namespace mfgeq
