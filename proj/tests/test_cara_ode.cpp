#include <doctest.h>

#include "ohmwell/cara_ode.hpp"
#include "ohmwell/errors.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

using namespace ohmwell;

namespace {

// y' = y, y(0) = 1 on [0, 1]; exact solution e^t.
OdeProblem exponential_problem() {
    OdeProblem p;
    p.dim = 1;
    p.rhs = [](double, TimeSide, std::span<const double> y, std::span<double> dy) {
        dy[0] = y[0];
    };
    p.growth.breaks = {0.0, 1.0};
    p.growth.values = {0.0};
    p.growth.c0 = 1.0;
    p.y0 = {1.0};
    p.horizon = 1.0;
    return p;
}

// y' = +1 on [0, 1/2), -1 on (1/2, 1]; y(0) = 0, so y(1) = 0 exactly.
OdeProblem square_wave_problem() {
    OdeProblem p;
    p.dim = 1;
    p.rhs = [](double t, TimeSide side, std::span<const double>, std::span<double> dy) {
        const bool first = t < 0.5 || (t == 0.5 && side == TimeSide::left);
        dy[0] = first ? 1.0 : -1.0;
    };
    p.growth.breaks = {0.0, 1.0};
    p.growth.values = {1.0};
    p.growth.c0 = 0.0;
    p.y0 = {0.0};
    p.horizon = 1.0;
    p.breakpoints = {0.5};
    return p;
}

} // namespace

TEST_CASE("GrowthEnvelope: piecewise lookup and integral") {
    GrowthEnvelope g;
    g.breaks = {0.0, 0.25, 1.0};
    g.values = {2.0, 3.0};
    g.c0 = 7.0;

    CHECK(g.at(0.1) == 2.0);
    CHECK(g.at(0.25, TimeSide::left) == 2.0);
    CHECK(g.at(0.25, TimeSide::right) == 3.0);
    CHECK(g.at(0.9) == 3.0);
    CHECK(g.integral() == doctest::Approx(2.75).epsilon(1e-15));
}

TEST_CASE("gronwall_bound: closed form and edge cases") {
    // c1 (1 + c2 t e^{c2 t}) at c1 = c2 = t = 1 is 1 + e.
    CHECK(gronwall_bound(1.0, 1.0, 1.0) ==
          doctest::Approx(3.7182818284590452).epsilon(1e-15));
    CHECK(gronwall_bound(2.5, 0.0, 10.0) == 2.5);
    CHECK(gronwall_bound(0.0, 1000.0, 1000.0) == 0.0);  // no overflow leak
    CHECK_THROWS_AS(gronwall_bound(-1.0, 1.0, 1.0), model_error);
    CHECK_THROWS_AS(gronwall_bound(1.0, -1.0, 1.0), model_error);
    CHECK_THROWS_AS(gronwall_bound(1.0, 1.0, -1.0), model_error);
}

TEST_CASE("truncation_radius: frozen values for unit-majorant problems") {
    OdeProblem p;
    p.dim = 1;
    p.y0 = {0.0};
    p.horizon = 1.0;
    p.growth.breaks = {0.0, 1.0};
    p.growth.values = {1.0};

    p.growth.c0 = 0.0;
    CHECK(truncation_radius(p) == doctest::Approx(1.001).epsilon(1e-15));

    p.growth.c0 = 1.0;
    CHECK(truncation_radius(p) ==
          doctest::Approx(3.7220001102875035).epsilon(1e-15));
}

TEST_CASE("ClampedRhs: identity inside the ball, radial projection outside") {
    RhsFn twice = [](double, TimeSide, std::span<const double> y, std::span<double> dy) {
        dy[0] = 2.0 * y[0];
        dy[1] = 2.0 * y[1];
    };
    ClampedRhs clamped(twice, 5.0);
    std::vector<double> dy(2);

    const std::vector<double> on_sphere{3.0, 4.0};  // |y| = 5, not clamped
    clamped(0.0, TimeSide::right, on_sphere, dy);
    CHECK(dy[0] == 6.0);
    CHECK(dy[1] == 8.0);
    CHECK_FALSE(clamped.activated());

    const std::vector<double> outside{6.0, 8.0};  // |y| = 10 -> scaled to (3, 4)
    clamped(0.0, TimeSide::right, outside, dy);
    CHECK(dy[0] == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(dy[1] == doctest::Approx(8.0).epsilon(1e-15));
    CHECK(clamped.activated());
}

TEST_CASE("integrate: constant zero field stays put") {
    OdeProblem p;
    p.dim = 2;
    p.rhs = [](double, TimeSide, std::span<const double>, std::span<double> dy) {
        dy[0] = 0.0;
        dy[1] = 0.0;
    };
    p.growth.breaks = {0.0, 2.0};
    p.growth.values = {0.0};
    p.y0 = {1.0, -3.0};
    p.horizon = 2.0;

    const auto traj = integrate(p, OdeScheme::rk4, 0.1);
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == 2.0);
    CHECK(traj.states.back()[0] == 1.0);
    CHECK(traj.states.back()[1] == -3.0);
    CHECK_FALSE(traj.clamp_activated);
}

TEST_CASE("integrate: RK4 reproduces e to rounding and matches the oracle") {
    const auto p = exponential_problem();
    const auto traj = integrate(p, OdeScheme::rk4, 1e-3);

    CHECK(std::abs(traj.states.back()[0] - 2.7182818284590452) <= 1e-10);
    CHECK(traj.steps == 1000);

    const auto y = oracle::rk4(
        [](double, const std::vector<double>& v) { return v; }, {1.0}, 0.0, 1.0, 1000);
    CHECK(traj.states.back()[0] == doctest::Approx(y[0]).epsilon(1e-14));
}

TEST_CASE("integrate: declared breakpoint makes a square wave exact") {
    const auto p = square_wave_problem();
    // dt that does not divide 0.5, so the seam forces uneven segments.
    const auto traj = integrate(p, OdeScheme::rk4, 3e-3);

    CHECK(traj.times.back() == 1.0);
    CHECK(std::abs(traj.states.back()[0]) <= 1e-14);

    // Peak value 1/2 is attained at the seam.
    double peak = 0.0;
    for (const auto& s : traj.states) peak = std::max(peak, s[0]);
    CHECK(peak == doctest::Approx(0.5).epsilon(1e-14));

    CHECK(residual_check(p, traj) <= 1e-12);
}

TEST_CASE("integrate: dishonest growth certificate is detected") {
    auto p = exponential_problem();
    p.growth.c0 = 0.0;               // lie: claim the field is bounded
    p.growth.values = {0.01};
    // radius = 1.01 * 1.001, but the true solution reaches e.
    CHECK_THROWS_AS(integrate(p, OdeScheme::rk4, 1e-3), model_error);
}

TEST_CASE("integrate: non-finite states are rejected") {
    OdeProblem p;
    p.dim = 1;
    p.rhs = [](double, TimeSide, std::span<const double>, std::span<double> dy) {
        dy[0] = std::numeric_limits<double>::quiet_NaN();
    };
    p.growth.breaks = {0.0, 1.0};
    p.growth.values = {1.0};
    p.y0 = {0.0};
    p.horizon = 1.0;
    CHECK_THROWS_AS(integrate(p, OdeScheme::rk4, 0.1), model_error);
}

TEST_CASE("integrate: implicit midpoint handles mild decay, rejects stiff steps") {
    OdeProblem decay;
    decay.dim = 1;
    decay.rhs = [](double, TimeSide, std::span<const double> y, std::span<double> dy) {
        dy[0] = -y[0];
    };
    decay.growth.breaks = {0.0, 1.0};
    decay.growth.values = {0.0};
    decay.growth.c0 = 1.0;
    decay.y0 = {1.0};
    decay.horizon = 1.0;

    const auto traj = integrate(decay, OdeScheme::midpoint_implicit, 1e-3);
    CHECK(std::abs(traj.states.back()[0] - std::exp(-1.0)) <= 1e-6);

    OdeProblem stiff = decay;
    stiff.rhs = [](double, TimeSide, std::span<const double> y, std::span<double> dy) {
        dy[0] = -50.0 * y[0];
    };
    stiff.growth.c0 = 50.0;
    // h |lambda| / 2 = 2.5: the fixed-point iteration cannot converge.
    CHECK_THROWS_AS(integrate(stiff, OdeScheme::midpoint_implicit, 0.1), model_error);
}

TEST_CASE("integrate: RK4 is fourth order on a smooth problem") {
    const auto p = exponential_problem();
    std::vector<double> errs;
    for (double dt : {0.2, 0.1, 0.05, 0.025}) {
        const auto traj = integrate(p, OdeScheme::rk4, dt);
        errs.push_back(std::abs(traj.states.back()[0] - 2.7182818284590452));
    }
    for (std::size_t i = 1; i < errs.size(); ++i) {
        const double ratio = errs[i - 1] / errs[i];
        CHECK(ratio >= 14.0);
        CHECK(ratio <= 18.0);
    }
}

TEST_CASE("residual_check: near zero for honest runs, large for corrupted ones") {
    const auto p = exponential_problem();
    auto traj = integrate(p, OdeScheme::rk4, 1e-3);
    CHECK(residual_check(p, traj) <= 1e-8);

    traj.states[500][0] += 1.0;
    CHECK(residual_check(p, traj) >= 0.5);
}

TEST_CASE("probe_growth: accepts honest certificates, flags tight lies") {
    OdeProblem p;
    p.dim = 2;
    p.rhs = [](double t, TimeSide, std::span<const double> y, std::span<double> dy) {
        dy[0] = std::sin(t) * y[0];
        dy[1] = std::sin(t) * y[1];
    };
    p.growth.breaks = {0.0, 1.0};
    p.growth.values = {0.0};
    p.growth.c0 = 1.0;
    p.y0 = {0.0, 0.0};
    p.horizon = 1.0;

    CHECK(probe_growth(p, 10000, 99, 5.0) <= 0.0);

    p.growth.c0 = 0.5;  // |sin(t)| exceeds 1/2 on most of [0, 1]
    CHECK(probe_growth(p, 10000, 99, 5.0) > 0.0);
}

TEST_CASE("probe_clamp: clamped field honours the capped envelope") {
    auto p = exponential_problem();
    CHECK(probe_clamp(p, 2.0, 10000, 7, 10.0) <= 1e-12);
}
