#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mfgeq/measures.hpp"

namespace mfgeq {

using TerminalFn = std::function<double(double x, const EmpiricalMeasure& mu)>;
using HamiltonianFn = std::function<double(double x, double p, const EmpiricalMeasure& mu)>;

/// Problem data (G, H, b̂) with closed-form derivatives.
struct ProblemSpec {
    std::string name;
    std::map<std::string, double> params;

    TerminalFn G;
    TerminalFn dxG;
    TerminalFn dxxG;
    HamiltonianFn H;
    HamiltonianFn dxH;
    HamiltonianFn dpH;
    HamiltonianFn bhat;

    /// sup |b̂|; the default seed offset for the Picard schemes.
    double drift_bound = 0.0;
};

/// Piecewise-quadratic drift of the worked example; nondecreasing, 2-Lipschitz,
/// saturating at ±2.
double bhat_section8(double p);

/// Looks up a registry entry. Unknown names or parameters throw
/// std::invalid_argument.
ProblemSpec make_problem(std::string_view name, const std::map<std::string, double>& params = {});

std::vector<std::string> registered_problems();

/// Probe set for the monotonicity/boundedness lint.
struct ProbePlan {
    std::vector<double> xs{-2.0, -1.0, -0.25, 0.0, 0.5, 1.0, 2.0};
    std::vector<double> ps{-3.0, -1.5, -1.0, -0.25, 0.0, 0.5, 1.0, 1.5, 3.0};
    /// Base measure; each shift builds a comonotone perturbation of it.
    EmpiricalMeasure base{std::vector<double>{-1.0, -0.2, 0.0, 0.4, 1.3}};
    std::vector<double> shifts{0.0, 0.1, 0.5, 1.0};
    double fd_step = 1e-5;
    double tolerance = 1e-9;
    /// Uniform bound checked (locally) for |∂ₓG| and |∂ₓₓG|.
    double gradient_bound = 10.0;
};

struct LintEntry {
    std::string assumption;
    std::string probe;
    bool pass;
    /// Signed slack: positive means satisfied with room to spare.
    double margin;
    /// Checked only over the probe set, not globally.
    bool local;
};

struct LintReport {
    std::vector<LintEntry> entries;

    bool all_pass() const;
    std::size_t failures() const;
};

/// Finite-difference monotonicity and boundedness probes of the increasing
/// case. Failures are reported, never thrown.
LintReport lint_assumptions(const ProblemSpec& spec, const ProbePlan& plan = {});

void write_lint_csv(std::ostream& os, const LintReport& report);

}  // namespace mfgeq
