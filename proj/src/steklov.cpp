#include "ohmwell/steklov.hpp"
#include "ohmwell/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ohmwell {
namespace {

// A malformed series is an input problem (the same class as a window that
// does not divide the step), not a violated mathematical hypothesis.
void validate_series(const TimeSeries& f, const char* where) {
    if (!(f.dt > 0.0))
        throw config_error(std::string(where) + ": sampling step must be positive");
    if (f.instants() < 2)
        throw config_error(std::string(where) + ": need at least two samples");
    const std::size_t c = f.components();
    if (c == 0)
        throw config_error(std::string(where) + ": series has no components");
    for (const auto& v : f.values)
        if (v.size() != c)
            throw config_error(std::string(where) + ": ragged component counts");
}

// Window width as a whole number of sampling steps.
std::size_t window_steps(const TimeSeries& f, double lambda, const char* where) {
    if (!(lambda > 0.0))
        throw config_error(std::string(where) + ": window must be positive");
    const double ratio = lambda / f.dt;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
        std::ostringstream os;
        os << where << ": window " << lambda << " is not an integer multiple of the step "
           << f.dt;
        throw config_error(os.str());
    }
    return static_cast<std::size_t>(rounded);
}

// Cumulative trapezoid integrals per component; icum[i] approximates the
// integral of f from 0 to t_i and is exact for the piecewise-linear
// interpolant.  Queries are clamped to [0, N], which realises the zero
// extension of that interpolant outside the window.
std::vector<std::vector<double>> cumulative(const TimeSeries& f) {
    const std::size_t n = f.instants(), c = f.components();
    std::vector<std::vector<double>> icum(n, std::vector<double>(c, 0.0));
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t k = 0; k < c; ++k)
            icum[i][k] = icum[i - 1][k] +
                         0.5 * f.dt * (f.values[i - 1][k] + f.values[i][k]);
    return icum;
}

} // namespace

AveragedSeries steklov(const TimeSeries& f, double lambda, Direction direction) {
    validate_series(f, "steklov");
    const std::size_t k = window_steps(f, lambda, "steklov");
    const auto icum = cumulative(f);
    const std::size_t n = f.instants(), c = f.components();
    const std::size_t last = n - 1;

    AveragedSeries out;
    out.lambda = lambda;
    out.direction = direction;
    out.series.dt = f.dt;
    out.series.values.assign(n, std::vector<double>(c, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = direction == Direction::forward ? i : (i >= k ? i - k : 0);
        const std::size_t hi = direction == Direction::forward ? std::min(i + k, last) : i;
        for (std::size_t comp = 0; comp < c; ++comp)
            out.series.values[i][comp] = (icum[hi][comp] - icum[lo][comp]) / lambda;
    }
    return out;
}

IdentityReport check_derivative_identity(const TimeSeries& f, double lambda) {
    validate_series(f, "check_derivative_identity");
    const std::size_t k = window_steps(f, lambda, "check_derivative_identity");
    const AveragedSeries avg = steklov(f, lambda, Direction::forward);
    const std::size_t n = f.instants(), c = f.components();
    const std::size_t intervals = n - 1;

    // Interval means of the zero-extended interpolant.
    auto mean = [&](std::size_t j, std::size_t comp) {
        return j < intervals ? 0.5 * (f.values[j][comp] + f.values[j + 1][comp]) : 0.0;
    };

    IdentityReport report;
    report.instants = intervals;
    for (std::size_t i = 0; i < intervals; ++i)
        for (std::size_t comp = 0; comp < c; ++comp) {
            const double lhs =
                (avg.series.values[i + 1][comp] - avg.series.values[i][comp]) / f.dt;
            const double rhs = (mean(i + k, comp) - mean(i, comp)) / lambda;
            report.max_discrepancy = std::max(report.max_discrepancy, std::abs(lhs - rhs));
        }
    return report;
}

IdentityReport check_adjoint_identity(const TimeSeries& f, const TimeSeries& alpha,
                                      double lambda) {
    validate_series(f, "check_adjoint_identity");
    validate_series(alpha, "check_adjoint_identity (test function)");
    if (alpha.instants() != f.instants() || alpha.components() != f.components() ||
        std::abs(alpha.dt - f.dt) > 1e-12 * f.dt)
        throw model_error("check_adjoint_identity: series and test function must share the grid");
    const std::size_t k = window_steps(f, lambda, "check_adjoint_identity");
    const std::size_t n = f.instants(), c = f.components();
    if (n < 2 * k + 2)
        throw model_error("check_adjoint_identity: window too wide for the sampled horizon");
    for (std::size_t i = 0; i < n; ++i) {
        if (i > k && i + k < n - 1) continue;
        for (std::size_t comp = 0; comp < c; ++comp)
            if (alpha.values[i][comp] != 0.0)
                throw model_error(
                    "check_adjoint_identity: test function must vanish within lambda of both endpoints");
    }

    const AveragedSeries ffwd = steklov(f, lambda, Direction::forward);
    const AveragedSeries abwd = steklov(alpha, lambda, Direction::backward);

    auto weight = [&](std::size_t i) { return (i == 0 || i == n - 1) ? 0.5 * f.dt : f.dt; };

    IdentityReport report;
    report.instants = n;
    for (std::size_t comp = 0; comp < c; ++comp) {
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            lhs += weight(i) * ffwd.series.values[i][comp] * alpha.values[i][comp];
            rhs += weight(i) * f.values[i][comp] * abwd.series.values[i][comp];
        }
        report.max_discrepancy = std::max(report.max_discrepancy, std::abs(lhs - rhs));
    }
    return report;
}

std::vector<ConvergenceRow> convergence_study(const TimeSeries& f,
                                              std::span<const double> lambdas) {
    validate_series(f, "convergence_study");
    if (lambdas.empty())
        throw config_error("convergence_study: need at least one window");
    const std::size_t n = f.instants(), c = f.components();
    auto weight = [&](std::size_t i) { return (i == 0 || i == n - 1) ? 0.5 * f.dt : f.dt; };

    std::vector<ConvergenceRow> rows;
    rows.reserve(lambdas.size());
    for (double lambda : lambdas) {
        const AveragedSeries avg = steklov(f, lambda, Direction::forward);
        double err2 = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t comp = 0; comp < c; ++comp) {
                const double d = avg.series.values[i][comp] - f.values[i][comp];
                err2 += weight(i) * d * d;
            }
        ConvergenceRow row;
        row.lambda = lambda;
        row.l2_error = std::sqrt(err2);
        if (rows.empty()) {
            row.observed_order = std::numeric_limits<double>::quiet_NaN();
        } else {
            const ConvergenceRow& prev = rows.back();
            row.observed_order = std::log(prev.l2_error / row.l2_error) /
                                 std::log(prev.lambda / lambda);
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace ohmwell

