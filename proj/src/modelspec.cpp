#include "mfgeq/modelspec.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "mfgeq/csv.hpp"

namespace mfgeq {

double bhat_section8(double p) {
    // Written around the saturation points so that the computed value stays
    // inside [-2, 2] and is monotone in floating point as well.
    if (p < -2.0) return -2.0;
    if (p < 0.0) {
        const double u = p + 2.0;
        return -2.0 + 0.5 * u * u;
    }
    if (p < 2.0) {
        const double u = 2.0 - p;
        return 2.0 - 0.5 * u * u;
    }
    return 2.0;
}

namespace {

double log_cosh(double x) {
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

double param_or(const std::map<std::string, double>& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

void reject_unknown(std::string_view problem, const std::map<std::string, double>& params,
                    std::initializer_list<std::string_view> known) {
    for (const auto& [key, value] : params) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw std::invalid_argument("problem '" + std::string(problem) + "' has no parameter '" + key + "'");
        }
    }
}

ProblemSpec section8() {
    ProblemSpec s;
    s.name = "section8";
    s.G = [](double x, const EmpiricalMeasure& mu) { return x * mean(mu); };
    s.dxG = [](double, const EmpiricalMeasure& mu) { return mean(mu); };
    s.dxxG = [](double, const EmpiricalMeasure&) { return 0.0; };
    s.H = [](double, double p, const EmpiricalMeasure&) { return 0.5 * p * p; };
    s.dxH = [](double, double, const EmpiricalMeasure&) { return 0.0; };
    s.dpH = [](double, double p, const EmpiricalMeasure&) { return p; };
    s.bhat = [](double, double p, const EmpiricalMeasure&) { return bhat_section8(p); };
    s.drift_bound = 2.0;
    return s;
}

// G = log cosh(x) + w x m(μ) with the same H and b̂ as the worked example.
// For a frozen flow the HJB solution is
//   v = w m x + (1 + (w m)^2)(T - t)/2 + log cosh(x + w m (T - t)),
// which has a genuinely curved profile and exercises the diffusion term.
ProblemSpec logcosh(const std::map<std::string, double>& params) {
    reject_unknown("logcosh", params, {"weight"});
    const double w = param_or(params, "weight", 1.0);
    ProblemSpec s;
    s.name = "logcosh";
    s.params = {{"weight", w}};
    s.G = [w](double x, const EmpiricalMeasure& mu) { return log_cosh(x) + w * x * mean(mu); };
    s.dxG = [w](double x, const EmpiricalMeasure& mu) { return std::tanh(x) + w * mean(mu); };
    s.dxxG = [](double x, const EmpiricalMeasure&) {
        const double c = std::cosh(x);
        return 1.0 / (c * c);
    };
    s.H = [](double, double p, const EmpiricalMeasure&) { return 0.5 * p * p; };
    s.dxH = [](double, double, const EmpiricalMeasure&) { return 0.0; };
    s.dpH = [](double, double p, const EmpiricalMeasure&) { return p; };
    s.bhat = [](double, double p, const EmpiricalMeasure&) { return bhat_section8(p); };
    s.drift_bound = 2.0;
    return s;
}

}  // namespace

ProblemSpec make_problem(std::string_view name, const std::map<std::string, double>& params) {
    if (name == "section8") {
        reject_unknown(name, params, {});
        return section8();
    }
    if (name == "logcosh") return logcosh(params);
    throw std::invalid_argument("unknown problem '" + std::string(name) + "'");
}

std::vector<std::string> registered_problems() { return {"logcosh", "section8"}; }

bool LintReport::all_pass() const { return failures() == 0; }

std::size_t LintReport::failures() const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [](const LintEntry& e) { return !e.pass; }));
}

namespace {

std::string probe_label(std::initializer_list<std::pair<const char*, double>> coords) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : coords) {
        if (!first) os << ' ';
        os << k << '=' << v;
        first = false;
    }
    return os.str();
}

class Linter {
public:
    Linter(const ProblemSpec& spec, const ProbePlan& plan) : spec_(spec), plan_(plan) {
        for (double s : plan_.shifts) measures_.push_back(shifted_comonotone(plan_.base, s));
    }

    LintReport run() {
        const auto& mu0 = measures_.front();
        const double h = plan_.fd_step;

        for (double x : plan_.xs) {
            monotone("dxG increasing in x", probe_label({{"x", x}}),
                     (spec_.dxG(x + h, mu0) - spec_.dxG(x - h, mu0)) / (2 * h));
            for_each_mu_pair([&](std::size_t a, std::size_t b) {
                monotone("dxG increasing in mu", shift_label(x, a, b),
                         spec_.dxG(x, measures_[b]) - spec_.dxG(x, measures_[a]));
            });
        }

        for (double x : plan_.xs) {
            for (double p : plan_.ps) {
                monotone("dxH increasing in x", probe_label({{"x", x}, {"p", p}}),
                         (spec_.dxH(x + h, p, mu0) - spec_.dxH(x - h, p, mu0)) / (2 * h));
                monotone("dpH increasing in p", probe_label({{"x", x}, {"p", p}}),
                         (spec_.dpH(x, p + h, mu0) - spec_.dpH(x, p - h, mu0)) / (2 * h));
                monotone("bhat increasing in p", probe_label({{"x", x}, {"p", p}}),
                         (spec_.bhat(x, p + h, mu0) - spec_.bhat(x, p - h, mu0)) / (2 * h));
                for_each_mu_pair([&](std::size_t a, std::size_t b) {
                    const auto label = shift_label(x, a, b) + " p=" + csv::format(p);
                    monotone("dxH increasing in mu", label,
                             spec_.dxH(x, p, measures_[b]) - spec_.dxH(x, p, measures_[a]));
                    monotone("dpH increasing in mu", label,
                             spec_.dpH(x, p, measures_[b]) - spec_.dpH(x, p, measures_[a]));
                    monotone("bhat increasing in mu", label,
                             spec_.bhat(x, p, measures_[b]) - spec_.bhat(x, p, measures_[a]));
                });
            }
        }

        bound_check();
        return std::move(report_);
    }

private:
    static EmpiricalMeasure shifted_comonotone(const EmpiricalMeasure& base, double shift) {
        // Adding a nondecreasing nonnegative perturbation to the sorted samples
        // keeps the quantile coupling ordered.
        std::vector<double> out(base.samples().begin(), base.samples().end());
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] += shift * (1.0 + static_cast<double>(i) / static_cast<double>(out.size()));
        }
        return EmpiricalMeasure::from_sorted(std::move(out));
    }

    std::string shift_label(double x, std::size_t a, std::size_t b) const {
        return probe_label({{"x", x}, {"shift_lo", plan_.shifts[a]}, {"shift_hi", plan_.shifts[b]}});
    }

    template <class F>
    void for_each_mu_pair(F&& f) {
        for (std::size_t a = 0; a + 1 < measures_.size(); ++a) f(a, a + 1);
    }

    void monotone(const char* assumption, std::string probe, double slack) {
        const bool ok = std::isfinite(slack) && slack >= -plan_.tolerance;
        report_.entries.push_back({assumption, std::move(probe), ok, slack, false});
    }

    void bound_check() {
        double max_dx = 0.0;
        double max_dxx = 0.0;
        double max_b = 0.0;
        for (const auto& mu : measures_) {
            for (double x : plan_.xs) {
                max_dx = std::max(max_dx, std::abs(spec_.dxG(x, mu)));
                max_dxx = std::max(max_dxx, std::abs(spec_.dxxG(x, mu)));
                for (double p : plan_.ps) max_b = std::max(max_b, std::abs(spec_.bhat(x, p, mu)));
            }
        }
        const double L = plan_.gradient_bound;
        report_.entries.push_back({"|dxG| bounded", "probe set bound=" + csv::format(L), max_dx <= L, L - max_dx, true});
        report_.entries.push_back(
            {"|dxxG| bounded", "probe set bound=" + csv::format(L), max_dxx <= L, L - max_dxx, true});
        const double B = spec_.drift_bound;
        report_.entries.push_back(
            {"|bhat| bounded by drift bound", "probe set bound=" + csv::format(B), max_b <= B, B - max_b, true});
    }

    const ProblemSpec& spec_;
    const ProbePlan& plan_;
    std::vector<EmpiricalMeasure> measures_;
    LintReport report_;
};

}  // namespace

LintReport lint_assumptions(const ProblemSpec& spec, const ProbePlan& plan) { return Linter(spec, plan).run(); }

void write_lint_csv(std::ostream& os, const LintReport& report) {
    os << "assumption,probe,pass,margin,local\n";
    for (const auto& e : report.entries) {
        csv::row(os, {e.assumption, e.probe, e.pass ? "1" : "0", csv::format(e.margin), e.local ? "1" : "0"});
    }
}

}  // namespace mfgeq
