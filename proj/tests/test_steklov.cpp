#include <doctest.h>

#include "ohmwell/errors.hpp"
#include "ohmwell/rng.hpp"
#include "ohmwell/steklov.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

using namespace ohmwell;

namespace {

TimeSeries sample(double dt, std::size_t instants, double (*f)(double)) {
    TimeSeries s;
    s.dt = dt;
    s.values.resize(instants);
    for (std::size_t i = 0; i < instants; ++i)
        s.values[i] = {f(dt * static_cast<double>(i))};
    return s;
}

double value_at(const AveragedSeries& g, double t) {
    const std::size_t i =
        static_cast<std::size_t>(std::llround(t / g.series.dt));
    return g.series.values[i][0];
}

} // namespace

TEST_CASE("steklov: zero input averages to zero, both directions") {
    const auto f = sample(0.05, 21, [](double) { return 0.0; });
    for (auto dir : {Direction::forward, Direction::backward}) {
        const auto g = steklov(f, 0.25, dir);
        CHECK(g.series.instants() == f.instants());
        for (const auto& row : g.series.values) CHECK(row[0] == 0.0);
    }
}

TEST_CASE("steklov: constant input with zero extension past the horizon") {
    // f = 1 on [0, 1], lambda = 1/4.  The forward window sees pure f until
    // t = 3/4, then a shrinking overlap: f_lambda(t) = (1 - t) / lambda.
    const auto f = sample(0.05, 21, [](double) { return 1.0; });
    const auto g = steklov(f, 0.25, Direction::forward);

    CHECK(value_at(g, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(value_at(g, 0.75) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(value_at(g, 0.8) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(value_at(g, 1.0) == doctest::Approx(0.0).epsilon(1e-15));

    // Backward mirrors it at t = 0.
    const auto h = steklov(f, 0.25, Direction::backward);
    CHECK(value_at(h, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(value_at(h, 0.2) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(value_at(h, 0.25) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(value_at(h, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("steklov: linear ramp has the closed-form average") {
    // f(t) = t, lambda = 0.2: f_lambda(t) = t + lambda/2 inside the window.
    const auto f = sample(0.05, 21, [](double t) { return t; });
    const auto g = steklov(f, 0.2, Direction::forward);
    CHECK(value_at(g, 0.3) == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(value_at(g, 0.0) == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("steklov: window validation") {
    const auto f = sample(0.05, 21, [](double t) { return t; });
    CHECK_THROWS_AS(steklov(f, 0.0, Direction::forward), config_error);
    CHECK_THROWS_AS(steklov(f, -0.1, Direction::forward), config_error);
    CHECK_THROWS_AS(steklov(f, 0.07, Direction::forward), config_error);  // not k * dt

    TimeSeries bad;
    bad.dt = 0.0;
    bad.values = {{1.0}};
    CHECK_THROWS_AS(steklov(bad, 0.1, Direction::forward), config_error);
}

TEST_CASE("steklov: linearity and non-expansiveness") {
    UniformSampler rng(31415);
    TimeSeries f, g;
    f.dt = g.dt = 0.01;
    f.values.resize(101);
    g.values.resize(101);
    for (std::size_t i = 0; i <= 100; ++i) {
        f.values[i] = {rng.next(-1.0, 1.0)};
        g.values[i] = {rng.next(-1.0, 1.0)};
    }

    TimeSeries sum;
    sum.dt = 0.01;
    sum.values.resize(101);
    for (std::size_t i = 0; i <= 100; ++i)
        sum.values[i] = {2.0 * f.values[i][0] - 3.0 * g.values[i][0]};

    const auto fa = steklov(f, 0.08, Direction::forward);
    const auto ga = steklov(g, 0.08, Direction::forward);
    const auto sa = steklov(sum, 0.08, Direction::forward);

    double sup_f = 0.0, sup_fa = 0.0;
    for (std::size_t i = 0; i <= 100; ++i) {
        const double lin = 2.0 * fa.series.values[i][0] - 3.0 * ga.series.values[i][0];
        CHECK(std::abs(sa.series.values[i][0] - lin) <= 1e-12);
        sup_f = std::max(sup_f, std::abs(f.values[i][0]));
        sup_fa = std::max(sup_fa, std::abs(fa.series.values[i][0]));
    }
    CHECK(sup_fa <= sup_f + 1e-12);  // averaging never amplifies the sup
}

TEST_CASE("check_derivative_identity: exact for constants, ramps, and noise") {
    // Exact in exact arithmetic; the floor is rounding amplified by the
    // 1/(lambda dt) scaling of the two difference quotients.
    const auto c = sample(0.02, 51, [](double) { return 4.0; });
    CHECK(check_derivative_identity(c, 0.1).max_discrepancy <= 1e-12);

    const auto r = sample(0.02, 51, [](double t) { return t; });
    CHECK(check_derivative_identity(r, 0.1).max_discrepancy <= 1e-12);

    UniformSampler rng(2718);
    TimeSeries noise;
    noise.dt = 0.01;
    noise.values.resize(201);
    for (auto& row : noise.values) row = {rng.next(-5.0, 5.0)};
    for (double lam : {0.01, 0.04, 0.32}) {
        const auto rep = check_derivative_identity(noise, lam);
        CHECK(rep.max_discrepancy <= 1e-12);
        CHECK(rep.instants > 0);
    }
}

TEST_CASE("check_adjoint_identity: exact when the test function is supported away from the ends") {
    const double dt = 0.01;
    const std::size_t n = 200;  // T = 2
    const double lambda = 0.1;  // k = 10

    UniformSampler rng(161803);
    TimeSeries f;
    f.dt = dt;
    f.values.resize(n + 1);
    for (auto& row : f.values) row = {rng.next(-2.0, 2.0)};

    // alpha vanishing on [0, lambda] and [T - lambda, T]: a sin^2 bump.
    TimeSeries alpha;
    alpha.dt = dt;
    alpha.values.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = dt * static_cast<double>(i);
        if (t <= lambda + 1e-12 || t >= 2.0 - lambda - 1e-12) {
            alpha.values[i] = {0.0};
        } else {
            const double s = (t - lambda) / (2.0 - 2.0 * lambda);
            const double b = std::sin(std::numbers::pi * s);
            alpha.values[i] = {b * b};
        }
    }

    CHECK(check_adjoint_identity(f, alpha, lambda).max_discrepancy <= 1e-12);

    // Zero test function pairs to zero on both sides.
    TimeSeries zero = alpha;
    for (auto& row : zero.values) row = {0.0};
    CHECK(check_adjoint_identity(f, zero, lambda).max_discrepancy == 0.0);

    // Support violation: alpha nonzero at the first instant.
    TimeSeries bad = alpha;
    bad.values[0] = {1.0};
    CHECK_THROWS_AS(check_adjoint_identity(f, bad, lambda), model_error);
}

TEST_CASE("convergence_study: errors shrink monotonically, order near 1 for a smooth bump") {
    // f(t) = sin(pi t / T) vanishes at both ends, so no boundary layer
    // pollutes the rate.
    const double T = 1.0;
    TimeSeries f;
    f.dt = 1.0 / 512.0;
    f.values.resize(513);
    for (std::size_t i = 0; i <= 512; ++i)
        f.values[i] = {std::sin(std::numbers::pi * f.dt * static_cast<double>(i) / T)};

    const std::vector<double> lambdas{32.0 / 512.0, 16.0 / 512.0, 8.0 / 512.0,
                                      4.0 / 512.0};
    const auto rows = convergence_study(f, lambdas);
    REQUIRE(rows.size() == 4);
    CHECK(std::isnan(rows[0].observed_order));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].l2_error < rows[i - 1].l2_error);
        CHECK(rows[i].observed_order >= 0.8);
        CHECK(rows[i].observed_order <= 1.2);
    }
}

TEST_CASE("convergence_study: constants and ramps shrink too") {
    for (auto fn : {+[](double) { return 1.0; }, +[](double t) { return t; }}) {
        const auto f = sample(1.0 / 256.0, 257, fn);
        const std::vector<double> lambdas{16.0 / 256.0, 8.0 / 256.0, 4.0 / 256.0};
        const auto rows = convergence_study(f, lambdas);
        for (std::size_t i = 1; i < rows.size(); ++i)
            CHECK(rows[i].l2_error < rows[i - 1].l2_error);
    }
}
