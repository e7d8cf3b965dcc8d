#ifndef OHMWELL_CARA_ODE_HPP
#define OHMWELL_CARA_ODE_HPP

/// @file cara_ode.hpp
/// @brief Initial value problems y' = f(t, y) whose right-hand side is
///        measurable in t (declared discontinuities only) and continuous in
///        y, with a certified linear growth bound |f| <= A(t) + C0 |y|.
///        The integrator truncates f outside a ball whose radius follows
///        from the Gronwall estimate, so a dishonest growth certificate is
///        detected instead of producing runaway states.

#include "ohmwell/ohm.hpp"  // TimeSide

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace ohmwell {

/// Right-hand side evaluation.  `side` selects the branch when t is one of
/// the declared discontinuities; elsewhere both sides must agree.
using RhsFn = std::function<void(double t, TimeSide side, std::span<const double> y,
                                 std::span<double> dy)>;

/// Piecewise-constant majorant A(t) plus the linear coefficient C0 of the
/// growth bound |f(t, y)| <= A(t) + C0 |y|.
struct GrowthEnvelope {
    std::vector<double> breaks{0.0, 0.0};  ///< 0 = b_0 < ... < b_n = horizon
    std::vector<double> values{0.0};       ///< A on each segment, size n
    double c0 = 0.0;

    double at(double t, TimeSide side = TimeSide::right) const;
    double integral() const;  ///< integral of A over [b_0, b_n]
};

struct OdeProblem {
    std::size_t dim = 0;
    RhsFn rhs;
    GrowthEnvelope growth;
    std::vector<double> y0;
    double horizon = 0.0;
    /// Declared discontinuity instants of the rhs; integration steps are
    /// split so no step straddles one.
    std::vector<double> breakpoints;
};

/// The Gronwall majorant c1 (1 + c2 t exp(c2 t)) for a function u satisfying
/// u(t) <= c1 + c2 * integral of u over [0, t].  Negative inputs throw
/// model_error; c1 = 0 returns 0 even when the exponential overflows.
double gronwall_bound(double c1, double c2, double t);

/// Truncation radius for the problem: the Gronwall bound on |y(t)| over the
/// full horizon, widened by a factor 1 + 1e-3 so an honest trajectory stays
/// strictly inside the clamp.
double truncation_radius(const OdeProblem& p);

/// Radially clamp the argument of the rhs to the ball |y| <= radius.  The
/// wrapper is the identity inside the ball and records whether it ever had
/// to clamp (shared across copies).
class ClampedRhs {
public:
    ClampedRhs(RhsFn inner, double radius);
    void operator()(double t, TimeSide side, std::span<const double> y,
                    std::span<double> dy) const;
    bool activated() const { return *activated_; }
    double radius() const { return radius_; }

private:
    RhsFn inner_;
    double radius_;
    std::shared_ptr<bool> activated_;
};

enum class OdeScheme { rk4, midpoint_implicit };

struct Trajectory {
    std::vector<double> times;                 ///< step endpoints, times[0] = 0
    std::vector<std::vector<double>> states;   ///< one state per instant
    std::size_t steps = 0;                     ///< sub-steps actually taken
    double radius = 0.0;                       ///< truncation radius used
    bool clamp_activated = false;              ///< the clamp fired at least once
};

/// Integrate the problem over [0, horizon] with nominal step dt (steps are
/// shortened so segment boundaries between declared breakpoints are hit
/// exactly).  RK4 evaluates endpoint stages one-sided so piecewise-smooth
/// right-hand sides stay smooth within every step; the implicit midpoint
/// rule solves its stage equation by fixed-point iteration (tolerance 1e-12,
/// at most 50 iterations, failure reported as a stiffness error).  A state
/// escaping the certified radius or turning non-finite throws model_error
/// naming the time of the violation.
///
/// `align` rounds each segment's step count up to a multiple of that value
/// (whenever the segment takes at least that many steps anyway), so every
/// align-th instant forms a uniform grid that contains the segment ends.
/// Callers thinning the recorded trajectory by an output stride pass the
/// stride here to keep the thinned time axis uniform through the horizon.
Trajectory integrate(const OdeProblem& p, OdeScheme scheme, double dt,
                     std::size_t align = 1);

/// Defect of the integral form y(t) = y0 + integral of f: the trajectory is
/// interpolated per interval (Hermite-Simpson) and the maximal Euclidean
/// discrepancy over recorded instants is returned.
double residual_check(const OdeProblem& p, const Trajectory& traj);

/// Max over random probes of |f(t,y)| - (A(t) + C0 |y|); positive means the
/// declared growth certificate is violated.  Probes sample t in [0, horizon]
/// and y componentwise in [-box, box].
double probe_growth(const OdeProblem& p, std::size_t samples, std::uint64_t seed,
                    double box);

/// Same probing for the clamped field against |f_r| <= A(t) + C0 min(|y|, r).
double probe_clamp(const OdeProblem& p, double radius, std::size_t samples,
                   std::uint64_t seed, double box);

} // namespace ohmwell

#endif
