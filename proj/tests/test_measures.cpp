#include <catch_amalgamated.hpp>

#include <sstream>

#include "mfgeq/errors.hpp"
#include "mfgeq/measures.hpp"
#include "oracles.hpp"

using namespace mfgeq;
using Catch::Approx;

TEST_CASE("samples are kept sorted and validated") {
    const EmpiricalMeasure mu({3.0, -1.0, 2.0, -1.0});
    REQUIRE(mu.size() == 4);
    CHECK(mu[0] == -1.0);
    CHECK(mu[1] == -1.0);
    CHECK(mu[3] == 3.0);

    CHECK_THROWS_AS(EmpiricalMeasure(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(EmpiricalMeasure({1.0, NAN}), std::invalid_argument);
    CHECK_THROWS_AS(EmpiricalMeasure({INFINITY}), std::invalid_argument);
    CHECK_THROWS_AS(EmpiricalMeasure::from_sorted({2.0, 1.0}), std::invalid_argument);
}

TEST_CASE("wasserstein2 pairs order statistics") {
    const EmpiricalMeasure a({0.0, 1.0}), b({2.0, 3.0});
    CHECK(wasserstein2(a, b) == Approx(2.0));
    CHECK(wasserstein2(a, a) == 0.0);
    // {0, 1} vs {1, 0} is the same measure.
    CHECK(wasserstein2(EmpiricalMeasure({0.0, 1.0}), EmpiricalMeasure({1.0, 0.0})) == 0.0);
    CHECK(wasserstein2(EmpiricalMeasure({-1.0, 1.0}), EmpiricalMeasure({0.0, 0.0})) == Approx(1.0));
}

TEST_CASE("operations on unequal sizes throw MismatchError") {
    const EmpiricalMeasure a({0.0, 1.0}), b({0.0, 1.0, 2.0});
    CHECK_THROWS_AS(wasserstein2(a, b), MismatchError);
    CHECK_THROWS_AS(dominates(a, b), MismatchError);
}

TEST_CASE("dominance examples") {
    CHECK(dominates(EmpiricalMeasure({0.0, 1.0}), EmpiricalMeasure({0.5, 1.0})));
    CHECK_FALSE(dominates(EmpiricalMeasure({0.5, 1.0}), EmpiricalMeasure({0.0, 1.0})));
    // Neither dominates: crossing CDFs.
    const EmpiricalMeasure a({-1.0, 2.0}), b({0.0, 1.0});
    CHECK_FALSE(dominates(a, b));
    CHECK_FALSE(dominates(b, a));
}

TEST_CASE("flow dominance and sup W2 need a common grid") {
    const EmpiricalMeasure a({0.0, 1.0}), b({1.0, 2.0});
    const auto fa = constant_flow(a, 0.0, 0.1, 3);
    const auto fb = constant_flow(b, 0.0, 0.1, 3);
    CHECK(flow_dominates(fa, fb));
    CHECK_FALSE(flow_dominates(fb, fa));
    CHECK(sup_wasserstein2(fa, fb) == Approx(1.0));
    CHECK_THROWS_AS(sup_wasserstein2(fa, constant_flow(a, 0.0, 0.1, 4)), MismatchError);
    CHECK_THROWS_AS(sup_wasserstein2(fa, constant_flow(a, 0.0, 0.2, 3)), MismatchError);
    CHECK_THROWS_AS(MeasureFlow(0.0, 0.1, {a}), std::invalid_argument);
    CHECK_THROWS_AS(MeasureFlow(0.0, 0.1, {a, EmpiricalMeasure({1.0})}), MismatchError);
}

TEST_CASE("resample uses quantile midpoints") {
    const EmpiricalMeasure mu({0.0, 1.0, 2.0, 3.0});
    CHECK(resample(mu, 4) == mu);
    const auto half = resample(mu, 2);
    CHECK(half[0] == 0.0);
    CHECK(half[1] == 2.0);
    const auto up = resample(EmpiricalMeasure({5.0}), 3);
    CHECK(up == EmpiricalMeasure({5.0, 5.0, 5.0}));
    CHECK_THROWS_AS(resample(mu, 0), std::invalid_argument);
}

TEST_CASE("gaussian quantiles are symmetric about the mean") {
    const auto mu = gaussian_quantiles(0.3, 0.5, 1001);
    CHECK(mean(mu) == Approx(0.3).margin(1e-14));
    CHECK(mu[500] == 0.3);
    CHECK(mu[0] - 0.3 == Approx(-(mu[1000] - 0.3)));
    const auto point = gaussian_quantiles(1.0, 0.0, 5);
    CHECK(point == EmpiricalMeasure({1.0, 1.0, 1.0, 1.0, 1.0}));
    CHECK_THROWS_AS(gaussian_quantiles(0.0, -1.0, 5), std::invalid_argument);
}

TEST_CASE("measure CSV round-trips exactly") {
    const EmpiricalMeasure mu({0.1, 1.0 / 3.0, -2.5e-17, 12345.678901234567});
    std::stringstream ss;
    write_measure_csv(ss, mu);
    CHECK(read_measure_csv(ss) == mu);

    std::stringstream bad("value\n1.0\nabc\n");
    CHECK_THROWS_AS(read_measure_csv(bad), IoError);
}

TEST_CASE("property suites hold on 1000 random cases each") {
    for (const auto& t : oracle::measure_properties(20261016, 1000)) {
        INFO(t.name);
        CHECK(t.cases == 1000);
        CHECK(t.failures == 0);
    }
}
