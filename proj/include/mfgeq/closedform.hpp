#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

namespace mfgeq::closedform {

// Exact solution of the worked example: G = x m(μ), H = p²/2, b̂ piecewise
// quadratic. Every equilibrium is determined by the scalar p* = m(ν*_T),
// a fixed point of p ↦ m + b̂(p)/λ with λ = 1/(T - t0).

enum class CaseLabel { C1, C2_1, C2_2, C2_3, C3_1, C3_2, C3_3, C4_1, C4_2, C4_3 };

std::string_view to_string(CaseLabel c);

/// Closed-form root families.
enum class Branch {
    FlatLow,        // m - 2/λ              (p < -2)
    QuadLowMinus,   // λ - 2 - φ₋           (-2 <= p < 0)
    QuadLowPlus,    // λ - 2 + φ₋
    FoldLow,        // λ - 2                (tangency, m = m₂)
    FoldHigh,       // 2 - λ                (tangency, m = -m₂)
    QuadHighMinus,  // 2 - λ - φ₊           (0 <= p < 2)
    QuadHighPlus,   // 2 - λ + φ₊
    FlatHigh,       // m + 2/λ              (p >= 2)
};

std::string_view to_string(Branch b);

/// λ-dependent thresholds of the case analysis.
struct ScalarCase {
    double lambda;
    double m;
    double m1;  // 2 - 2/λ
    double m2;  // λ/2 + 2/λ - 2
    CaseLabel label;
};

struct Root {
    double value;
    Branch branch;
};

struct RootSet {
    ScalarCase scalar_case;
    /// Ascending, 1 to 3 entries.
    std::vector<Root> roots;

    double p_min() const { return roots.front().value; }
    double p_max() const { return roots.back().value; }
    std::size_t size() const noexcept { return roots.size(); }
};

inline constexpr double kBoundaryBand = 1e-12;

/// Threshold separating cases 2 and 3, 4 - 2√2.
double lambda_fold() noexcept;

double m1(double lambda);
double m2(double lambda);
/// φ∓(λ, m) = sqrt((λ - 2)² ∓ 2λm); discriminants within 1e-12 of zero are
/// clamped, clearly negative ones throw NumericalError.
double phi_minus(double lambda, double m);
double phi_plus(double lambda, double m);

/// m + b̂(p)/λ. Throws std::domain_error for λ <= 0.
double phi_hat(double lambda, double m, double p);

/// |p - m - b̂(p)/λ|.
double fixed_point_residual(double lambda, double m, double p);

/// Case attribution; boundaries (|m| = m₂ and λ ∈ {1, 4-2√2, 2}) within
/// 1e-12 are routed to the boundary case.
ScalarCase classify(double lambda, double m);

/// Every fixed point of p ↦ m + b̂(p)/λ, from the case-by-case closed forms.
/// Throws NumericalError if a root fails the residual check (which would
/// mean the case was misattributed).
RootSet solve_roots(double lambda, double m);

/// Value of a branch formula at (λ, m).
double branch_value(Branch b, double lambda, double m);

double minimal_p(double lambda, double m);
double maximal_p(double lambda, double m);

enum class Selector { Min, Max };
enum class Side { Below, Above };

/// One-sided limit of the selector along m at fixed λ: the branch active just
/// below (or above) m is identified and its formula is evaluated at m itself.
double selector_limit_m(Selector sel, double lambda, double m, Side side);

/// One-sided limit along t at fixed m. λ = 1/(T - t) increases with t, so
/// approaching t from below is approaching λ from below.
double selector_limit_lambda(Selector sel, double lambda, double m, Side side);

/// x p + p²/(2λ) with p the selected equilibrium slope.
double closed_value(double lambda, double m, double x, Selector sel);

/// (lambda, m, case, n_roots, root1, root2, root3, p_min, p_max)
void write_roots_csv_header(std::ostream& os);
void write_roots_csv_row(std::ostream& os, const RootSet& rs);

}  // namespace mfgeq::closedform
