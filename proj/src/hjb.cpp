#include "mfgeq/hjb.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "mfgeq/csv.hpp"
#include "mfgeq/errors.hpp"

namespace mfgeq {

GridConfig grid_for(const EmpiricalMeasure& init, double horizon, double drift_bound, std::size_t space_intervals,
                    double c1, double c2) {
    if (!(horizon > 0.0)) throw std::invalid_argument("grid_for: horizon must be positive");
    const double pad = 4.0 * std::sqrt(horizon) + std::abs(drift_bound) * horizon;
    GridConfig g;
    g.space_intervals = space_intervals;
    g.x_lo = init.samples().front() - pad;
    g.x_hi = init.samples().back() + pad;
    g.c1 = c1;
    g.c2 = c2;
    return g;
}

GridFunction::GridFunction(double t0, double dt, std::size_t steps, GridConfig grid, std::vector<double> v,
                           std::vector<double> dxv)
    : t0_(t0), dt_(dt), steps_(steps), grid_(grid), v_(std::move(v)), dxv_(std::move(dxv)) {
    if (grid_.space_intervals < 2) throw std::invalid_argument("grid function needs at least two space intervals");
    if (!(grid_.x_hi > grid_.x_lo)) throw std::invalid_argument("grid function needs x_hi > x_lo");
    const std::size_t expected = (steps_ + 1) * nodes();
    if (v_.size() != expected || dxv_.size() != expected) {
        throw std::invalid_argument("grid function lattice has the wrong size");
    }
}

namespace {

double lerp_clamped(double a, double b, double w) {
    // a + w (b - a) is monotone in w; the clamp keeps the value inside [a, b]
    // so neighbouring cells never overlap.
    const double raw = a + w * (b - a);
    return std::clamp(raw, std::min(a, b), std::max(a, b));
}

}  // namespace

double GridFunction::dxv_row(std::size_t k, double x) const noexcept {
    const std::size_t last = grid_.space_intervals;
    const double s = (x - grid_.x_lo) / grid_.dx();
    double value;
    if (!(s > 0.0)) {
        value = dxv(k, 0);
    } else if (s >= static_cast<double>(last)) {
        value = dxv(k, last);
    } else {
        const auto j = static_cast<std::size_t>(s);
        value = lerp_clamped(dxv(k, j), dxv(k, j + 1), s - static_cast<double>(j));
    }
    return std::clamp(value, -grid_.c1, grid_.c1);
}

double GridFunction::v_row(std::size_t k, double x) const noexcept {
    const std::size_t last = grid_.space_intervals;
    const double dx = grid_.dx();
    const double s = (x - grid_.x_lo) / dx;
    if (s <= 0.0) return v(k, 0) + (x - grid_.x_lo) * (v(k, 1) - v(k, 0)) / dx;
    if (s >= static_cast<double>(last)) return v(k, last) + (x - grid_.x_hi) * (v(k, last) - v(k, last - 1)) / dx;
    const auto j = static_cast<std::size_t>(s);
    const double w = s - static_cast<double>(j);
    return v(k, j) + w * (v(k, j + 1) - v(k, j));
}

double GridFunction::max_abs_dxv() const noexcept {
    double m = 0.0;
    for (double g : dxv_) m = std::max(m, std::abs(g));
    return m;
}

namespace {

// Thomas algorithm; `lower`, `diag`, `upper` are overwritten.
void solve_tridiagonal(std::vector<double>& lower, std::vector<double>& diag, std::vector<double>& upper,
                       std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

void fill_gradient_row(const double* v, double* dxv, std::size_t nodes, double dx) {
    dxv[0] = (v[1] - v[0]) / dx;
    for (std::size_t j = 1; j + 1 < nodes; ++j) dxv[j] = (v[j + 1] - v[j - 1]) / (2.0 * dx);
    dxv[nodes - 1] = (v[nodes - 1] - v[nodes - 2]) / dx;
}

[[noreturn]] void throw_non_finite(double t, double x) {
    std::ostringstream msg;
    msg << "solve_hjb: non-finite value at t=" << t << ", x=" << x;
    throw NumericalError(msg.str());
}

}  // namespace

GridFunction solve_hjb(const ProblemSpec& spec, const MeasureFlow& nu, const GridConfig& grid) {
    if (grid.space_intervals < 2) throw std::invalid_argument("solve_hjb: need at least two space intervals");
    if (!(grid.x_hi > grid.x_lo)) throw std::invalid_argument("solve_hjb: need x_hi > x_lo");
    if (!(grid.theta >= 0.0 && grid.theta <= 1.0)) throw std::invalid_argument("solve_hjb: theta must be in [0, 1]");

    const std::size_t steps = nu.steps();
    const std::size_t nodes = grid.space_intervals + 1;
    const double dx = grid.dx();
    const double dt = nu.dt();
    // θ-scheme for ½∂ₓₓ is stable for θ >= 1/2; below that (1 - 2θ) dt <= dx².
    if (grid.theta < 0.5 && (1.0 - 2.0 * grid.theta) * dt > dx * dx) {
        std::ostringstream msg;
        msg << "solve_hjb: CFL violated for explicit diffusion, (1 - 2 theta) dt = " << (1.0 - 2.0 * grid.theta) * dt
            << " > dx^2 = " << dx * dx << " (dt=" << dt << ", dx=" << dx << ")";
        throw NumericalError(msg.str());
    }

    std::vector<double> v((steps + 1) * nodes);
    std::vector<double> dxv((steps + 1) * nodes);
    std::vector<double> xs(nodes);
    for (std::size_t j = 0; j < nodes; ++j) xs[j] = grid.x_lo + dx * static_cast<double>(j);

    {
        const auto& terminal = nu.terminal();
        double* row = &v[steps * nodes];
        for (std::size_t j = 0; j < nodes; ++j) {
            row[j] = spec.G(xs[j], terminal);
            if (!std::isfinite(row[j])) throw_non_finite(nu.time(steps), xs[j]);
        }
    }

    const double r = grid.theta * 0.5 * dt / (dx * dx);
    const double r_explicit = (1.0 - grid.theta) * 0.5 * dt / (dx * dx);
    std::vector<double> lower(nodes), diag(nodes), upper(nodes), rhs(nodes);

    for (std::size_t k = steps; k-- > 0;) {
        const double* u = &v[(k + 1) * nodes];
        const auto& mu = nu.at(k + 1);
        for (std::size_t j = 0; j < nodes; ++j) {
            double grad;
            if (j == 0) {
                grad = (u[1] - u[0]) / dx;
            } else if (j + 1 == nodes) {
                grad = (u[j] - u[j - 1]) / dx;
            } else {
                grad = (u[j + 1] - u[j - 1]) / (2.0 * dx);
            }
            const double speed = spec.dpH(xs[j], grad, mu);
            if (std::abs(speed) * dt > dx) {
                std::ostringstream msg;
                msg << "solve_hjb: CFL violated at t=" << nu.time(k + 1) << ", x=" << xs[j] << ": |dpH| dt / dx = "
                    << std::abs(speed) * dt / dx << " > 1 (dt=" << dt << ", dx=" << dx << ")";
                throw NumericalError(msg.str());
            }
            if (j > 0 && j + 1 < nodes && std::abs(speed) * dx > 1.0) {
                grad = speed > 0.0 ? (u[j + 1] - u[j]) / dx : (u[j] - u[j - 1]) / dx;
            }
            const double ham = spec.H(xs[j], grad, mu);

            if (j == 0 || j + 1 == nodes) {
                lower[j] = 0.0;
                diag[j] = 1.0;
                upper[j] = 0.0;
                rhs[j] = u[j] + dt * ham;
            } else {
                lower[j] = -r;
                diag[j] = 1.0 + 2.0 * r;
                upper[j] = -r;
                rhs[j] = u[j] + r_explicit * (u[j - 1] - 2.0 * u[j] + u[j + 1]) + dt * ham;
            }
        }
        solve_tridiagonal(lower, diag, upper, rhs);
        double* row = &v[k * nodes];
        for (std::size_t j = 0; j < nodes; ++j) {
            if (!std::isfinite(rhs[j])) throw_non_finite(nu.time(k), xs[j]);
            row[j] = rhs[j];
        }
    }

    for (std::size_t k = 0; k <= steps; ++k) fill_gradient_row(&v[k * nodes], &dxv[k * nodes], nodes, dx);

    GridFunction gf(nu.t0(), dt, steps, grid, std::move(v), std::move(dxv));
    const double worst = gf.max_abs_dxv();
    if (worst > grid.c1 + 10.0 * dx) {
        std::ostringstream msg;
        msg << "max |dxv| = " << worst << " exceeds C1 + 10 dx = " << grid.c1 + 10.0 * dx;
        throw AuditError("gradient bound", msg.str());
    }
    return gf;
}

namespace {

struct TimeSlot {
    std::size_t k;
    double w;
};

TimeSlot locate_time(const GridFunction& gf, double t) {
    const double tol = 1e-9 * std::max(1.0, std::abs(gf.terminal_time()));
    if (!(t >= gf.t0() - tol && t <= gf.terminal_time() + tol)) {
        std::ostringstream msg;
        msg << "time " << t << " outside [" << gf.t0() << ", " << gf.terminal_time() << "]";
        throw std::out_of_range(msg.str());
    }
    const double s = std::clamp((t - gf.t0()) / gf.dt(), 0.0, static_cast<double>(gf.steps()));
    auto k = static_cast<std::size_t>(s);
    if (k >= gf.steps()) return {gf.steps(), 0.0};
    return {k, s - static_cast<double>(k)};
}

}  // namespace

double eval_dxv(const GridFunction& gf, double t, double x) {
    const auto [k, w] = locate_time(gf, t);
    if (w == 0.0) return gf.dxv_row(k, x);
    return (1.0 - w) * gf.dxv_row(k, x) + w * gf.dxv_row(k + 1, x);
}

double eval_v(const GridFunction& gf, double t, double x) {
    const auto [k, w] = locate_time(gf, t);
    if (w == 0.0) return gf.v_row(k, x);
    return (1.0 - w) * gf.v_row(k, x) + w * gf.v_row(k + 1, x);
}

void write_grid_csv(std::ostream& os, const GridFunction& gf) {
    os << "t,x,v,dxv\n";
    for (std::size_t k = 0; k <= gf.steps(); ++k) {
        const std::string t = csv::format(gf.time(k));
        for (std::size_t j = 0; j < gf.nodes(); ++j) {
            os << t << ',' << csv::format(gf.x(j)) << ',' << csv::format(gf.v(k, j)) << ','
               << csv::format(gf.dxv(k, j)) << '\n';
        }
    }
}

}  // namespace mfgeq
