#include <catch_amalgamated.hpp>

#include <sstream>

#include "mfgeq/modelspec.hpp"
#include "oracles.hpp"

using namespace mfgeq;
using Catch::Approx;

TEST_CASE("drift matches the expanded piecewise form") {
    CHECK(bhat_section8(-3.0) == -2.0);
    CHECK(bhat_section8(-2.0) == -2.0);
    CHECK(bhat_section8(0.0) == 0.0);
    CHECK(bhat_section8(2.0) == 2.0);
    CHECK(bhat_section8(1.0) == 1.5);
    CHECK(bhat_section8(-1.0) == -1.5);
    double worst = 0.0;
    for (double p = -3.0; p <= 3.0; p += 0.001) worst = std::max(worst, std::abs(bhat_section8(p) - oracle::bhat(p)));
    CHECK(worst <= 1e-14);
}

TEST_CASE("drift is monotone in floating point") {
    std::size_t bad = 0;
    double prev = bhat_section8(-3.0);
    for (double p = -3.0; p <= 3.0; p = std::nextafter(p, 4.0) + 1e-6) {
        const double v = bhat_section8(p);
        if (v < prev || std::abs(v) > 2.0) ++bad;
        prev = v;
    }
    // Consecutive doubles around the breakpoints.
    for (double c : {-2.0, 0.0, 2.0}) {
        double p = c - 1e-12;
        prev = bhat_section8(p);
        for (int i = 0; i < 20000; ++i) {
            p = std::nextafter(p, 10.0);
            const double v = bhat_section8(p);
            if (v < prev) ++bad;
            prev = v;
        }
    }
    CHECK(bad == 0);
}

TEST_CASE("registry") {
    const auto s = make_problem("section8");
    const EmpiricalMeasure mu({-1.0, 0.5, 2.0});
    CHECK(s.G(2.0, mu) == Approx(2.0 * 0.5));
    CHECK(s.dxG(-7.0, mu) == Approx(0.5));
    CHECK(s.H(0.0, 3.0, mu) == 4.5);
    CHECK(s.drift_bound == 2.0);

    const auto lc = make_problem("logcosh", {{"weight", 0.5}});
    CHECK(lc.params.at("weight") == 0.5);
    CHECK(lc.G(0.0, mu) == Approx(0.0).margin(1e-15));
    CHECK(lc.G(30.0, mu) == Approx(30.0 - std::log(2.0) + 0.5 * 30.0 * 0.5));

    CHECK_THROWS_AS(make_problem("nope"), std::invalid_argument);
    CHECK_THROWS_AS(make_problem("section8", {{"weight", 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(make_problem("logcosh", {{"bogus", 1.0}}), std::invalid_argument);
    CHECK(registered_problems().size() == 2);
}

TEST_CASE("built-in problems pass the lint") {
    for (const auto& name : registered_problems()) {
        const auto rep = lint_assumptions(make_problem(name));
        INFO(name);
        CHECK(rep.all_pass());
        CHECK(rep.entries.size() > 100);
    }
}

TEST_CASE("lint flags a decreasing terminal gradient") {
    auto s = make_problem("section8");
    s.dxG = [](double x, const EmpiricalMeasure&) { return -x; };
    const auto rep = lint_assumptions(s);
    CHECK_FALSE(rep.all_pass());
    bool found = false;
    for (const auto& e : rep.entries) {
        if (!e.pass) {
            CHECK(e.assumption == "dxG increasing in x");
            CHECK(e.margin < 0.0);
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("lint flags anti-monotone mean dependence and an unbounded drift") {
    auto s = make_problem("section8");
    s.dxG = [](double, const EmpiricalMeasure& mu) { return -mean(mu); };
    s.bhat = [](double, double p, const EmpiricalMeasure&) { return 3.0 * p; };
    const auto rep = lint_assumptions(s);
    std::size_t mu_fail = 0, bound_fail = 0;
    for (const auto& e : rep.entries) {
        if (e.pass) continue;
        if (e.assumption == "dxG increasing in mu") ++mu_fail;
        if (e.assumption == "|bhat| bounded by drift bound") {
            ++bound_fail;
            CHECK(e.local);
        }
    }
    CHECK(mu_fail > 0);
    CHECK(bound_fail > 0);
}

TEST_CASE("lint CSV has one row per entry") {
    const auto rep = lint_assumptions(make_problem("section8"));
    std::ostringstream os;
    write_lint_csv(os, rep);
    const auto text = os.str();
    CHECK(text.rfind("assumption,probe,pass,margin,local\n", 0) == 0);
    CHECK(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) == rep.entries.size() + 1);
}
