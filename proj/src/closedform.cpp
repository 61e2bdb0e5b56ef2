#include "mfgeq/closedform.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "mfgeq/csv.hpp"
#include "mfgeq/errors.hpp"
#include "mfgeq/modelspec.hpp"

namespace mfgeq::closedform {

std::string_view to_string(CaseLabel c) {
    switch (c) {
        case CaseLabel::C1: return "C1";
        case CaseLabel::C2_1: return "C2.1";
        case CaseLabel::C2_2: return "C2.2";
        case CaseLabel::C2_3: return "C2.3";
        case CaseLabel::C3_1: return "C3.1";
        case CaseLabel::C3_2: return "C3.2";
        case CaseLabel::C3_3: return "C3.3";
        case CaseLabel::C4_1: return "C4.1";
        case CaseLabel::C4_2: return "C4.2";
        case CaseLabel::C4_3: return "C4.3";
    }
    return "?";
}

std::string_view to_string(Branch b) {
    switch (b) {
        case Branch::FlatLow: return "m-2/lambda";
        case Branch::QuadLowMinus: return "lambda-2-phi_minus";
        case Branch::QuadLowPlus: return "lambda-2+phi_minus";
        case Branch::FoldLow: return "lambda-2";
        case Branch::FoldHigh: return "2-lambda";
        case Branch::QuadHighMinus: return "2-lambda-phi_plus";
        case Branch::QuadHighPlus: return "2-lambda+phi_plus";
        case Branch::FlatHigh: return "m+2/lambda";
    }
    return "?";
}

double lambda_fold() noexcept { return 4.0 - 2.0 * std::sqrt(2.0); }

namespace {

void require_positive(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::domain_error("lambda must be positive and finite");
}

double clamped_sqrt(double disc, const char* which, double lambda, double m) {
    if (disc < 0.0) {
        if (disc >= -kBoundaryBand) return 0.0;
        std::ostringstream msg;
        msg << which << "(" << lambda << ", " << m << ") has negative discriminant " << disc
            << " in a selected branch; case misattributed";
        throw NumericalError(msg.str());
    }
    return std::sqrt(disc);
}

}  // namespace

double m1(double lambda) {
    require_positive(lambda);
    return 2.0 - 2.0 / lambda;
}

double m2(double lambda) {
    require_positive(lambda);
    return lambda / 2.0 + 2.0 / lambda - 2.0;
}

double phi_minus(double lambda, double m) {
    require_positive(lambda);
    return clamped_sqrt((lambda - 2.0) * (lambda - 2.0) - 2.0 * lambda * m, "phi_minus", lambda, m);
}

double phi_plus(double lambda, double m) {
    require_positive(lambda);
    return clamped_sqrt((lambda - 2.0) * (lambda - 2.0) + 2.0 * lambda * m, "phi_plus", lambda, m);
}

double phi_hat(double lambda, double m, double p) {
    require_positive(lambda);
    return m + bhat_section8(p) / lambda;
}

double fixed_point_residual(double lambda, double m, double p) { return std::abs(p - phi_hat(lambda, m, p)); }

ScalarCase classify(double lambda, double m) {
    require_positive(lambda);
    if (!std::isfinite(m)) throw std::domain_error("m must be finite");
    const double lf = lambda_fold();
    ScalarCase sc{lambda, m, m1(lambda), m2(lambda), CaseLabel::C1};

    int family;
    if (lambda >= 2.0 || std::abs(lambda - 2.0) <= kBoundaryBand) {
        family = 1;
    } else if (std::abs(lambda - lf) <= kBoundaryBand) {
        family = 3;
    } else if (std::abs(lambda - 1.0) <= kBoundaryBand) {
        family = 4;
    } else if (lambda > lf) {
        family = 2;
    } else if (lambda > 1.0) {
        family = 3;
    } else {
        family = 4;
    }
    if (family == 1) return sc;

    const double d = std::abs(m) - sc.m2;
    const int sub = std::abs(d) <= kBoundaryBand ? 2 : (d > 0.0 ? 1 : 3);
    static constexpr CaseLabel table[3][3] = {
        {CaseLabel::C2_1, CaseLabel::C2_2, CaseLabel::C2_3},
        {CaseLabel::C3_1, CaseLabel::C3_2, CaseLabel::C3_3},
        {CaseLabel::C4_1, CaseLabel::C4_2, CaseLabel::C4_3},
    };
    sc.label = table[family - 2][sub - 1];
    return sc;
}

double branch_value(Branch b, double lambda, double m) {
    require_positive(lambda);
    switch (b) {
        case Branch::FlatLow: return m - 2.0 / lambda;
        case Branch::QuadLowMinus: return lambda - 2.0 - phi_minus(lambda, m);
        case Branch::QuadLowPlus: return lambda - 2.0 + phi_minus(lambda, m);
        case Branch::FoldLow: return lambda - 2.0;
        case Branch::FoldHigh: return 2.0 - lambda;
        case Branch::QuadHighMinus: return 2.0 - lambda - phi_plus(lambda, m);
        case Branch::QuadHighPlus: return 2.0 - lambda + phi_plus(lambda, m);
        case Branch::FlatHigh: return m + 2.0 / lambda;
    }
    throw std::logic_error("unknown branch");
}

namespace {

using B = Branch;

// Branch families of each case, transcribed case by case. Where the
// sub-intervals share an endpoint, the first listed interval wins; the
// formulas agree there.
std::vector<Branch> branches_for(const ScalarCase& sc) {
    const double m = sc.m;
    const double m1v = sc.m1;
    switch (sc.label) {
        case CaseLabel::C1:
            if (m < -m1v) return {B::FlatLow};
            if (m < 0.0) return {B::QuadLowMinus};
            if (m < m1v) return {B::QuadHighPlus};
            return {B::FlatHigh};

        case CaseLabel::C2_1:
            if (m < -m1v) return {B::FlatLow};
            if (m < 0.0) return {B::QuadLowMinus};  // -m1 <= m < -m2
            if (m < m1v) return {B::QuadHighPlus};  // m2 < m < m1
            return {B::FlatHigh};
        case CaseLabel::C2_2:
            if (m < 0.0) return {B::QuadLowMinus, B::FoldHigh};
            return {B::FoldLow, B::QuadHighPlus};
        case CaseLabel::C2_3:
            if (m <= 0.0) return {B::QuadLowMinus, B::QuadHighMinus, B::QuadHighPlus};
            return {B::QuadLowMinus, B::QuadLowPlus, B::QuadHighPlus};

        case CaseLabel::C3_1:
        case CaseLabel::C4_1:
            if (m < 0.0) return {B::FlatLow};
            return {B::FlatHigh};
        case CaseLabel::C3_2:
        case CaseLabel::C4_2:
            if (m < 0.0) return {B::FlatLow, B::FoldHigh};
            return {B::FoldLow, B::FlatHigh};

        case CaseLabel::C3_3:
            if (m <= -m1v) return {B::FlatLow, B::QuadHighMinus, B::QuadHighPlus};
            if (m <= 0.0) return {B::QuadLowMinus, B::QuadHighMinus, B::QuadHighPlus};
            if (m <= m1v) return {B::QuadLowMinus, B::QuadLowPlus, B::QuadHighPlus};
            return {B::QuadLowMinus, B::QuadLowPlus, B::FlatHigh};

        case CaseLabel::C4_3:
            if (m <= m1v) return {B::FlatLow, B::QuadHighMinus, B::QuadHighPlus};
            if (m < 0.0) return {B::FlatLow, B::FlatHigh, B::QuadHighMinus};
            if (m <= -m1v) return {B::FlatLow, B::FlatHigh, B::QuadLowPlus};
            return {B::QuadLowMinus, B::QuadLowPlus, B::FlatHigh};
    }
    throw std::logic_error("unknown case");
}

constexpr double kResidualCheck = 1e-9;

}  // namespace

RootSet solve_roots(double lambda, double m) {
    RootSet rs{classify(lambda, m), {}};
    for (Branch b : branches_for(rs.scalar_case)) {
        const double p = branch_value(b, lambda, m);
        const double res = fixed_point_residual(lambda, m, p);
        if (!(res <= kResidualCheck * std::max(1.0, std::abs(p)))) {
            std::ostringstream msg;
            msg << "solve_roots(" << lambda << ", " << m << "): branch " << to_string(b) << " in case "
                << to_string(rs.scalar_case.label) << " gives p=" << p << " with residual " << res;
            throw NumericalError(msg.str());
        }
        rs.roots.push_back({p, b});
    }
    std::sort(rs.roots.begin(), rs.roots.end(), [](const Root& a, const Root& b) { return a.value < b.value; });
    auto last = std::unique(rs.roots.begin(), rs.roots.end(),
                            [](const Root& a, const Root& b) { return std::abs(a.value - b.value) <= kBoundaryBand; });
    rs.roots.erase(last, rs.roots.end());
    return rs;
}

double minimal_p(double lambda, double m) { return solve_roots(lambda, m).p_min(); }

double maximal_p(double lambda, double m) { return solve_roots(lambda, m).p_max(); }

namespace {

constexpr double kLimitProbe = 1e-8;

const Root& select(const RootSet& rs, Selector sel) { return sel == Selector::Min ? rs.roots.front() : rs.roots.back(); }

}  // namespace

double selector_limit_m(Selector sel, double lambda, double m, Side side) {
    const double h = kLimitProbe * std::max(1.0, std::abs(m));
    const auto rs = solve_roots(lambda, side == Side::Below ? m - h : m + h);
    return branch_value(select(rs, sel).branch, lambda, m);
}

double selector_limit_lambda(Selector sel, double lambda, double m, Side side) {
    const double h = kLimitProbe * std::max(1.0, lambda);
    const auto rs = solve_roots(side == Side::Below ? lambda - h : lambda + h, m);
    return branch_value(select(rs, sel).branch, lambda, m);
}

double closed_value(double lambda, double m, double x, Selector sel) {
    const double p = sel == Selector::Min ? minimal_p(lambda, m) : maximal_p(lambda, m);
    return x * p + p * p / (2.0 * lambda);
}

void write_roots_csv_header(std::ostream& os) { os << "lambda,m,case,n_roots,root1,root2,root3,p_min,p_max\n"; }

void write_roots_csv_row(std::ostream& os, const RootSet& rs) {
    std::string r[3];
    for (std::size_t i = 0; i < rs.roots.size() && i < 3; ++i) r[i] = csv::format(rs.roots[i].value);
    csv::row(os, {csv::format(rs.scalar_case.lambda), csv::format(rs.scalar_case.m), to_string(rs.scalar_case.label),
                  std::to_string(rs.size()), r[0], r[1], r[2], csv::format(rs.p_min()), csv::format(rs.p_max())});
}

}  // namespace mfgeq::closedform
