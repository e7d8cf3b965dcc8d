#ifndef OHMWELL_STEKLOV_HPP
#define OHMWELL_STEKLOV_HPP

/// @file steklov.hpp
/// @brief Forward and backward Steklov time averages of uniformly sampled
///        series, f_lambda(t) = (1/lambda) * integral of f over [t, t+lambda],
///        with the integrand extended by zero outside the sampled window.
///        The discrete averages are built from exact trapezoid integrals of
///        the piecewise-linear interpolant, which makes the derivative and
///        adjoint identities below hold to rounding rather than to O(dt).

#include <cstddef>
#include <span>
#include <vector>

namespace ohmwell {

/// Uniform samples of a vector-valued function of time: values[i] holds the
/// components at t = i * dt.
struct TimeSeries {
    double dt = 0.0;
    std::vector<std::vector<double>> values;

    std::size_t instants() const { return values.size(); }
    std::size_t components() const { return values.empty() ? 0 : values.front().size(); }
    double horizon() const { return dt * static_cast<double>(values.size() - 1); }
};

enum class Direction { forward, backward };

struct AveragedSeries {
    TimeSeries series;
    double lambda = 0.0;
    Direction direction = Direction::forward;
};

/// Steklov average with window lambda, which must be a positive integer
/// multiple of the sampling step (checked to 1e-9 relative; misalignment
/// throws config_error).
AveragedSeries steklov(const TimeSeries& f, double lambda, Direction direction);

struct IdentityReport {
    double max_discrepancy = 0.0;
    std::size_t instants = 0;

    bool pass(double tol) const { return max_discrepancy <= tol; }
};

/// Difference-quotient identity of the forward average: the discrete time
/// derivative of f_lambda equals the lambda-shifted difference of interval
/// means of f, exactly.  Returns the worst absolute discrepancy.
IdentityReport check_derivative_identity(const TimeSeries& f, double lambda);

/// Adjoint (summation-by-parts) identity: <f_lambda, alpha> = <f, alpha
/// backward-averaged> with trapezoid pairing over [0, T].  Requires alpha to
/// vanish within lambda of both endpoints (throws model_error otherwise) and
/// to share the grid of f.
IdentityReport check_adjoint_identity(const TimeSeries& f, const TimeSeries& alpha,
                                      double lambda);

struct ConvergenceRow {
    double lambda = 0.0;
    double l2_error = 0.0;       ///< trapezoid L2(0,T) distance of f_lambda from f
    double observed_order = 0.0; ///< log-ratio slope versus the previous row; NaN on the first
};

/// L2 convergence of the forward average for each window in `lambdas`.
std::vector<ConvergenceRow> convergence_study(const TimeSeries& f,
                                              std::span<const double> lambdas);

} // namespace ohmwell

#endif
