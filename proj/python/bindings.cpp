#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "mfgeq/closedform.hpp"
#include "mfgeq/config.hpp"
#include "mfgeq/errors.hpp"
#include "mfgeq/scenario.hpp"

namespace py = pybind11;
namespace cf = mfgeq::closedform;

namespace {

std::vector<double> samples_of(const mfgeq::EmpiricalMeasure& mu) { return {mu.samples().begin(), mu.samples().end()}; }

py::dict trace_dict(const mfgeq::PicardTrace& tr) {
    py::dict d;
    d["direction"] = mfgeq::to_string(tr.direction);
    d["residuals"] = tr.residuals;
    d["mean_at_T"] = tr.mean_at_T;
    d["converged"] = tr.converged;
    d["stalled"] = tr.stalled;
    d["iterations"] = tr.iterations_used;
    d["mfe_residual"] = tr.mfe_residual;
    d["audited_pairs"] = tr.audited_pairs;
    d["terminal_samples"] = samples_of(tr.flow().terminal());
    return d;
}

// Both extreme equilibria from explicit initial samples.
py::dict solve(const std::string& problem, double t0, double T, const std::vector<double>& samples,
               std::uint64_t seed, std::size_t steps, std::size_t space_intervals, std::size_t max_iter,
               double tau_picard) {
    const auto spec = mfgeq::make_problem(problem);
    const mfgeq::EmpiricalMeasure mu(samples);
    mfgeq::PicardConfig cfg;
    cfg.space_intervals = space_intervals;
    cfg.max_iter = max_iter;
    cfg.tau_picard = tau_picard;
    const mfgeq::NoiseSpec ns{seed, mu.size(), steps, true};
    const auto noise = ns.make(T - t0);
    mfgeq::PicardTrace lower, upper;
    {
        py::gil_scoped_release release;
        lower = mfgeq::minimal_mfe(spec, t0, mu, cfg, noise);
        upper = mfgeq::maximal_mfe(spec, t0, mu, cfg, noise);
    }
    py::dict d;
    d["minimal"] = trace_dict(lower);
    d["maximal"] = trace_dict(upper);
    d["sandwich"] = mfgeq::flow_dominates(lower.flow(), upper.flow());
    return d;
}

}  // namespace

PYBIND11_MODULE(_mfgeq, m) {
    m.doc() = "Minimal and maximal mean field equilibria by monotone Picard iteration";
    m.attr("__version__") = mfgeq::version();

    auto base = py::register_exception<mfgeq::Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<mfgeq::ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<mfgeq::AuditError>(m, "AuditError", base.ptr());
    py::register_exception<mfgeq::NumericalError>(m, "NumericalError", base.ptr());
    py::register_exception<mfgeq::MismatchError>(m, "MismatchError", base.ptr());
    py::register_exception<mfgeq::IoError>(m, "IoError", base.ptr());

    // measures
    m.def("wasserstein2", [](const std::vector<double>& a, const std::vector<double>& b) {
        return mfgeq::wasserstein2(mfgeq::EmpiricalMeasure(a), mfgeq::EmpiricalMeasure(b));
    });
    m.def("dominates", [](const std::vector<double>& a, const std::vector<double>& b) {
        return mfgeq::dominates(mfgeq::EmpiricalMeasure(a), mfgeq::EmpiricalMeasure(b));
    }, "True when the first measure is stochastically dominated by the second");
    m.def("gaussian_quantiles", [](double mean, double std, std::size_t n) {
        return samples_of(mfgeq::gaussian_quantiles(mean, std, n));
    });

    // closed form
    m.def("roots", [](double lambda, double mm) {
        std::vector<double> out;
        for (const auto& r : cf::solve_roots(lambda, mm).roots) out.push_back(r.value);
        return out;
    }, py::arg("lam"), py::arg("m"));
    m.def("case_label", [](double lambda, double mm) { return std::string(cf::to_string(cf::classify(lambda, mm).label)); },
          py::arg("lam"), py::arg("m"));
    m.def("minimal_p", &cf::minimal_p, py::arg("lam"), py::arg("m"));
    m.def("maximal_p", &cf::maximal_p, py::arg("lam"), py::arg("m"));
    m.def("m1", &cf::m1);
    m.def("m2", &cf::m2);
    m.def("minimal_p_limits", [](double lambda, double mm) {
        return py::make_tuple(cf::selector_limit_m(cf::Selector::Min, lambda, mm, cf::Side::Below),
                              cf::selector_limit_m(cf::Selector::Min, lambda, mm, cf::Side::Above));
    }, py::arg("lam"), py::arg("m"), "One-sided limits of the minimal selector along m");

    // model
    m.def("problems", &mfgeq::registered_problems);
    m.def("lint", [](const std::string& name, const std::map<std::string, double>& params) {
        py::list out;
        for (const auto& e : mfgeq::lint_assumptions(mfgeq::make_problem(name, params)).entries) {
            out.append(py::make_tuple(e.assumption, e.probe, e.pass, e.margin));
        }
        return out;
    }, py::arg("name"), py::arg("params") = std::map<std::string, double>{});

    // equilibria
    m.def("solve", &solve, py::arg("problem"), py::arg("t0"), py::arg("T"), py::arg("samples"), py::arg("seed") = 1,
          py::arg("steps") = 100, py::arg("space_intervals") = 400, py::arg("max_iter") = 200,
          py::arg("tau_picard") = 1e-3);

    // scenarios
    m.def("check_config", [](const std::string& text) { return mfgeq::parse_config_text(text).to_text(); },
          "Parse and validate config text; returns the canonical form");
    m.def("run_scenario", [](const std::filesystem::path& path) {
        const auto cfg = mfgeq::load_config(path);
        std::ostringstream log;
        mfgeq::ScenarioResult res;
        {
            py::gil_scoped_release release;
            res = mfgeq::run_scenario(cfg, log);
        }
        py::dict d;
        d["minimal"] = trace_dict(res.lower);
        d["maximal"] = trace_dict(res.upper);
        d["out_dir"] = cfg.out_dir;
        return d;
    });
}
