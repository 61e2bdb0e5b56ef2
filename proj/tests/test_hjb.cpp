#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "mfgeq/errors.hpp"
#include "mfgeq/hjb.hpp"

using namespace mfgeq;
using Catch::Approx;

namespace {

GridConfig box(double lo, double hi, std::size_t j) {
    GridConfig g;
    g.x_lo = lo;
    g.x_hi = hi;
    g.space_intervals = j;
    return g;
}

// Frozen flow whose every slice has mean m.
MeasureFlow frozen(double m, double horizon, std::size_t steps) {
    return constant_flow(EmpiricalMeasure({m - 0.5, m, m + 0.5}), 0.0, horizon / static_cast<double>(steps), steps);
}

// Linear-in-x exact solution for the worked example.
double v_linear(double m, double s, double x) { return x * m + 0.5 * s * m * m; }

// Exact solution for the log-cosh terminal cost with weight w.
double v_logcosh(double a, double s, double x) {
    const double y = x + a * s;
    return a * x + 0.5 * (1.0 + a * a) * s + std::abs(y) + std::log1p(std::exp(-2.0 * std::abs(y))) - std::log(2.0);
}
double dxv_logcosh(double a, double s, double x) { return a + std::tanh(x + a * s); }

template <class Exact>
double max_node_error(const GridFunction& gf, Exact exact) {
    double worst = 0.0;
    for (std::size_t k = 0; k <= gf.steps(); ++k) {
        const double s = gf.terminal_time() - gf.time(k);
        for (std::size_t j = 0; j < gf.nodes(); ++j) worst = std::max(worst, std::abs(gf.v(k, j) - exact(s, gf.x(j))));
    }
    return worst;
}

double logcosh_error(std::size_t j, std::size_t steps) {
    const double m = 0.4;
    const auto spec = make_problem("logcosh");
    const auto gf = solve_hjb(spec, frozen(m, 1.0, steps), box(-8.0, 8.0, j));
    return max_node_error(gf, [m](double s, double x) { return v_logcosh(m, s, x); });
}

}  // namespace

TEST_CASE("worked example: frozen-flow solution is reproduced") {
    const auto spec = make_problem("section8");
    for (double m : {-1.3, -0.2, 0.0, 0.7}) {
        const auto gf = solve_hjb(spec, frozen(m, 1.0, 200), box(-5.0, 5.0, 1000));
        CHECK(gf.grid().dx() == Approx(0.01));
        const double err = max_node_error(gf, [m](double s, double x) { return v_linear(m, s, x); });
        INFO("m = " << m << " err = " << err);
        CHECK(err <= 1e-3);
        for (std::size_t j = 0; j < gf.nodes(); ++j) CHECK(gf.dxv(0, j) == Approx(m).margin(1e-9));
    }
}

TEST_CASE("log-cosh: error halves as dx and dt halve together") {
    const double e1 = logcosh_error(160, 40);
    const double e2 = logcosh_error(320, 80);
    const double e3 = logcosh_error(640, 160);
    INFO("errors " << e1 << " " << e2 << " " << e3);
    CHECK(e1 < 5e-2);
    CHECK(e2 <= 0.55 * e1);
    CHECK(e3 <= 0.55 * e2);
}

TEST_CASE("log-cosh gradient matches tanh profile") {
    const double m = -0.3;
    const auto gf = solve_hjb(make_problem("logcosh"), frozen(m, 0.5, 200), box(-8.0, 8.0, 1600));
    double worst = 0.0;
    for (std::size_t j = 100; j + 100 < gf.nodes(); ++j) worst = std::max(worst, std::abs(gf.dxv(0, j) - dxv_logcosh(m, 0.5, gf.x(j))));
    CHECK(worst < 5e-3);
}

TEST_CASE("gradient is nondecreasing in x for convex terminal data") {
    const auto gf = solve_hjb(make_problem("logcosh"), frozen(0.2, 1.0, 100), box(-6.0, 6.0, 300));
    for (std::size_t k = 0; k <= gf.steps(); ++k) {
        for (std::size_t j = 1; j < gf.nodes(); ++j) REQUIRE(gf.dxv(k, j) >= gf.dxv(k, j - 1) - 1e-12);
    }
}

TEST_CASE("interpolation and extrapolation") {
    const auto gf = solve_hjb(make_problem("section8"), frozen(0.5, 1.0, 10), box(-1.0, 1.0, 20));
    CHECK(eval_dxv(gf, 0.35, 0.123) == Approx(0.5).margin(1e-12));
    CHECK(eval_dxv(gf, 0.0, 50.0) == Approx(0.5).margin(1e-12));
    CHECK(eval_v(gf, 1.0, 3.0) == Approx(1.5).margin(1e-12));
    CHECK(eval_v(gf, 0.0, 0.0) == Approx(0.125).margin(1e-12));
    CHECK_THROWS_AS(eval_dxv(gf, -0.1, 0.0), std::out_of_range);
    CHECK_THROWS_AS(eval_v(gf, 1.1, 0.0), std::out_of_range);
}

TEST_CASE("stability errors") {
    const auto spec = make_problem("section8");
    SECTION("advective CFL") {
        // |p| dt / dx = 3 * 0.1 / 0.01 > 1.
        CHECK_THROWS_AS(solve_hjb(spec, frozen(3.0, 1.0, 10), box(-1.0, 1.0, 200)), NumericalError);
    }
    SECTION("explicit diffusion") {
        auto g = box(-1.0, 1.0, 200);
        g.theta = 0.0;
        CHECK_THROWS_AS(solve_hjb(spec, frozen(0.1, 1.0, 10), g), NumericalError);
    }
    SECTION("gradient audit") {
        auto g = box(-1.0, 1.0, 20);
        g.c1 = 0.1;
        CHECK_THROWS_AS(solve_hjb(spec, frozen(2.0, 1.0, 100), g), AuditError);
    }
}

TEST_CASE("grid_for covers the particle cloud") {
    const EmpiricalMeasure mu({-1.0, 0.0, 2.0});
    const auto g = grid_for(mu, 0.25, 2.0, 100);
    CHECK(g.x_lo == Approx(-1.0 - 4.0 * 0.5 - 0.5));
    CHECK(g.x_hi == Approx(2.0 + 4.0 * 0.5 + 0.5));
    CHECK(g.space_intervals == 100);
}

TEST_CASE("grid CSV header") {
    const auto gf = solve_hjb(make_problem("section8"), frozen(0.5, 1.0, 2), box(-1.0, 1.0, 2));
    std::ostringstream os;
    write_grid_csv(os, gf);
    CHECK(os.str().rfind("t,x,v,dxv\n", 0) == 0);
}

TEST_CASE("gradient moves little under a small W2 perturbation of the flow") {
    const auto spec = make_problem("logcosh");
    const auto g = box(-6.0, 6.0, 300);
    const auto base = solve_hjb(spec, frozen(0.3, 1.0, 100), g);
    double prev = INFINITY;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        const auto moved = solve_hjb(spec, frozen(0.3 + eps, 1.0, 100), g);
        double worst = 0.0;
        for (std::size_t j = 0; j < base.nodes(); ++j) worst = std::max(worst, std::abs(moved.dxv(0, j) - base.dxv(0, j)));
        INFO("eps " << eps << " change " << worst);
        CHECK(worst < 3.0 * eps);
        CHECK(worst < prev);
        prev = worst;
    }
}
