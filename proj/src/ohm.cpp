#include "ohmwell/ohm.hpp"
#include "ohmwell/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ohmwell {
namespace {

double dot3(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

double norm3(const Vec3& a) { return std::sqrt(dot3(a, a)); }

double interp_linear(std::span<const double> xs, std::span<const double> vs,
                     double x, const char* what) {
    if (x < xs.front() || x > xs.back()) {
        std::ostringstream os;
        os << what << ": query " << x << " outside tabulated range ["
           << xs.front() << ", " << xs.back() << "]";
        throw model_error(os.str());
    }
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t i = static_cast<std::size_t>(it - xs.begin());
    if (i == 0) i = 1;
    if (i >= xs.size()) i = xs.size() - 1;
    const double s = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return vs[i - 1] + s * (vs[i] - vs[i - 1]);
}

// Piecewise-constant lookup with one-sided evaluation at breakpoints.
double step_value(std::span<const double> breaks, std::span<const double> values,
                  double t, TimeSide side) {
    if (t < breaks.front() || t > breaks.back()) {
        std::ostringstream os;
        os << "source current: time " << t << " outside declared range ["
           << breaks.front() << ", " << breaks.back() << "]";
        throw model_error(os.str());
    }
    // Segment i covers [breaks[i], breaks[i+1]); TimeSide::left assigns a
    // breakpoint to the segment ending there instead.
    std::size_t i;
    if (side == TimeSide::right) {
        auto it = std::upper_bound(breaks.begin(), breaks.end(), t);
        i = static_cast<std::size_t>(it - breaks.begin());
    } else {
        // lower_bound already lands on the breakpoint itself when t hits one,
        // so values[i - 1] is the segment ending at t.
        auto it = std::lower_bound(breaks.begin(), breaks.end(), t);
        i = static_cast<std::size_t>(it - breaks.begin());
    }
    if (i == 0) i = 1;
    if (i > values.size()) i = values.size();
    return values[i - 1];
}

} // namespace

Vec3 eval_j0(const OhmLaw& law, double x, double t, TimeSide side) {
    const SourceCurrent& j0 = law.j0;
    switch (j0.kind) {
        case SourceCurrent::Kind::zero:
            return {0.0, 0.0, 0.0};
        case SourceCurrent::Kind::constant:
            return j0.amplitude;
        case SourceCurrent::Kind::product: {
            const double p = interp_linear(j0.profile_x, j0.profile_v, x, "source profile");
            const double s = step_value(j0.time_breaks, j0.time_values, t, side);
            return {j0.direction[0] * p * s, j0.direction[1] * p * s, j0.direction[2] * p * s};
        }
    }
    throw model_error("eval_j0: unknown source kind");
}

Vec3 eval_j1(const OhmLaw& law, double /*x*/, double /*t*/, const Vec3& xi) {
    switch (law.kind) {
        case OhmLaw::Kind::zero:
            return {0.0, 0.0, 0.0};
        case OhmLaw::Kind::linear:
            return {law.sigma0 * xi[0], law.sigma0 * xi[1], law.sigma0 * xi[2]};
        case OhmLaw::Kind::saturating: {
            const double f = law.sigma0 / std::sqrt(1.0 + dot3(xi, xi));
            return {f * xi[0], f * xi[1], f * xi[2]};
        }
        case OhmLaw::Kind::tabulated: {
            const double r = norm3(xi);
            if (r == 0.0) return {0.0, 0.0, 0.0};
            const double m = interp_linear(law.tab_r, law.tab_m, r, "tabulated Ohm law");
            const double f = m / r;
            return {f * xi[0], f * xi[1], f * xi[2]};
        }
    }
    throw model_error("eval_j1: unknown law kind");
}

Vec3 eval_j(const OhmLaw& law, double x, double t, const Vec3& xi, TimeSide side) {
    const Vec3 a = eval_j0(law, x, t, side);
    const Vec3 b = eval_j1(law, x, t, xi);
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

double dissipation_density(const OhmLaw& law, double x, double t, const Vec3& xi,
                           TimeSide side) {
    return dot3(eval_j(law, x, t, xi, side), xi);
}

GrowthReport check_growth(const OhmLaw& law, std::span<const GrowthSample> samples) {
    GrowthReport report;
    report.max_ratio = 0.0;
    for (const auto& s : samples) {
        const double r = norm3(s.xi);
        if (r == 0.0) continue;
        const double ratio = norm3(eval_j1(law, s.x, s.t, s.xi)) / r;
        if (ratio > report.max_ratio) {
            report.max_ratio = ratio;
            report.worst = s;
        }
        ++report.tested;
    }
    report.vacuous = report.tested == 0;
    report.pass = report.vacuous || report.max_ratio <= law.c1 * (1.0 + 1e-12);
    return report;
}

MonotonicityReport check_monotonicity(const OhmLaw& law,
                                      std::span<const MonotonicityPair> pairs) {
    MonotonicityReport report;
    report.min_product = std::numeric_limits<double>::infinity();
    for (const auto& p : pairs) {
        const Vec3 jx = eval_j1(law, p.x, p.t, p.xi);
        const Vec3 je = eval_j1(law, p.x, p.t, p.eta);
        const Vec3 dj{jx[0] - je[0], jx[1] - je[1], jx[2] - je[2]};
        const Vec3 dxi{p.xi[0] - p.eta[0], p.xi[1] - p.eta[1], p.xi[2] - p.eta[2]};
        const double product = dot3(dj, dxi);
        if (product < report.min_product) {
            report.min_product = product;
            report.worst = p;
        }
        ++report.tested;
    }
    if (report.tested == 0) report.min_product = 0.0;
    report.pass = report.min_product >= -1e-12;
    return report;
}

} // namespace ohmwell

