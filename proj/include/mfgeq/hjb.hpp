#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "mfgeq/measures.hpp"
#include "mfgeq/modelspec.hpp"

namespace mfgeq {

/// Spatial lattice and gradient constants for the backward solver. The time
/// grid always comes from the frozen measure flow.
struct GridConfig {
    std::size_t space_intervals = 400;
    double x_lo = -5.0;
    double x_hi = 5.0;
    /// Gradient bound C1; |∂ₓv| above C1 + 10 dx is an audit failure.
    double c1 = 10.0;
    /// Second-derivative bound C2 (reported, not enforced).
    double c2 = 100.0;
    /// Implicit weight of the diffusion term (0.5 = Crank–Nicolson).
    double theta = 0.5;

    double dx() const noexcept { return (x_hi - x_lo) / static_cast<double>(space_intervals); }
};

/// Domain [min ξ - 4√h - L h, max ξ + 4√h + L h] for horizon h and drift
/// bound L, which covers the particle cloud plus its Brownian spread.
GridConfig grid_for(const EmpiricalMeasure& init, double horizon, double drift_bound, std::size_t space_intervals,
                    double c1 = 10.0, double c2 = 100.0);

/// v and ∂ₓv on a (time × space) lattice, row-major by time.
class GridFunction {
public:
    GridFunction(double t0, double dt, std::size_t steps, GridConfig grid, std::vector<double> v,
                 std::vector<double> dxv);

    double t0() const noexcept { return t0_; }
    double dt() const noexcept { return dt_; }
    double terminal_time() const noexcept { return t0_ + dt_ * static_cast<double>(steps_); }
    std::size_t steps() const noexcept { return steps_; }
    std::size_t nodes() const noexcept { return grid_.space_intervals + 1; }
    const GridConfig& grid() const noexcept { return grid_; }

    double time(std::size_t k) const noexcept { return t0_ + dt_ * static_cast<double>(k); }
    double x(std::size_t j) const noexcept { return grid_.x_lo + grid_.dx() * static_cast<double>(j); }

    double v(std::size_t k, std::size_t j) const noexcept { return v_[k * nodes() + j]; }
    double dxv(std::size_t k, std::size_t j) const noexcept { return dxv_[k * nodes() + j]; }

    /// ∂ₓv on time row k, linearly interpolated in x, constant beyond the
    /// domain, clamped to [-C1, C1]. Monotone in x whenever the row is.
    double dxv_row(std::size_t k, double x) const noexcept;
    double v_row(std::size_t k, double x) const noexcept;

    double max_abs_dxv() const noexcept;

private:
    double t0_;
    double dt_;
    std::size_t steps_;
    GridConfig grid_;
    std::vector<double> v_;
    std::vector<double> dxv_;
};

/// Backward march of ∂ₜv + ½∂ₓₓv + H(x, ∂ₓv, ν_t) = 0, v(T) = G(·, ν_T).
///
/// Diffusion is θ-implicit (tridiagonal solve per step). The Hamiltonian is
/// explicit, with a central gradient where the cell Péclet number |∂ₚH| dx is
/// at most 1 and an upwind gradient elsewhere. Boundary nodes carry
/// ∂ₓₓv = 0, i.e. linear tails.
///
/// Throws NumericalError if |∂ₚH| dt / dx > 1 anywhere (CFL) or a value goes
/// non-finite, and AuditError if |∂ₓv| exceeds C1 + 10 dx.
GridFunction solve_hjb(const ProblemSpec& spec, const MeasureFlow& nu, const GridConfig& grid);

/// Bilinear ∂ₓv at (t, x); constant in x outside the lattice, clamped to
/// [-C1, C1]. Throws std::out_of_range for t outside [t0, T].
double eval_dxv(const GridFunction& gf, double t, double x);

/// Bilinear v at (t, x); linear extrapolation in x outside the lattice.
double eval_v(const GridFunction& gf, double t, double x);

void write_grid_csv(std::ostream& os, const GridFunction& gf);

}  // namespace mfgeq
