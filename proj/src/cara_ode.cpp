#include "ohmwell/cara_ode.hpp"
#include "ohmwell/errors.hpp"
#include "ohmwell/linalg.hpp"
#include "ohmwell/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ohmwell {
namespace {

void validate_envelope(const GrowthEnvelope& g) {
    if (g.breaks.size() < 2 || g.values.size() + 1 != g.breaks.size())
        throw model_error("growth envelope: need one more breakpoint than segment values");
    for (std::size_t i = 1; i < g.breaks.size(); ++i)
        if (!(g.breaks[i] > g.breaks[i - 1]))
            throw model_error("growth envelope: breakpoints must be strictly increasing");
    for (double v : g.values)
        if (!(v >= 0.0))
            throw model_error("growth envelope: majorant values must be non-negative");
    if (!(g.c0 >= 0.0))
        throw model_error("growth envelope: linear coefficient must be non-negative");
}

std::vector<double> axpy(const std::vector<double>& y, double h,
                         const std::vector<double>& k) {
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + h * k[i];
    return out;
}

} // namespace

double GrowthEnvelope::at(double t, TimeSide side) const {
    validate_envelope(*this);
    if (t < breaks.front() || t > breaks.back())
        throw model_error("growth envelope: query time outside declared range");
    std::size_t i;
    if (side == TimeSide::right) {
        auto it = std::upper_bound(breaks.begin(), breaks.end(), t);
        i = static_cast<std::size_t>(it - breaks.begin());
    } else {
        // lower_bound lands on the breakpoint itself when t hits one, so
        // values[i - 1] is the segment ending at t.
        auto it = std::lower_bound(breaks.begin(), breaks.end(), t);
        i = static_cast<std::size_t>(it - breaks.begin());
    }
    if (i == 0) i = 1;
    if (i > values.size()) i = values.size();
    return values[i - 1];
}

double GrowthEnvelope::integral() const {
    validate_envelope(*this);
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        s += (breaks[i + 1] - breaks[i]) * values[i];
    return s;
}

double gronwall_bound(double c1, double c2, double t) {
    if (!(c1 >= 0.0) || !(c2 >= 0.0) || !(t >= 0.0))
        throw model_error("gronwall_bound: arguments must be non-negative");
    if (c1 == 0.0) return 0.0;
    return c1 * (1.0 + c2 * t * std::exp(c2 * t));
}

double truncation_radius(const OdeProblem& p) {
    validate_envelope(p.growth);
    const double c1 = norm2(p.y0) + p.growth.integral();
    return gronwall_bound(c1, p.growth.c0, p.horizon) * (1.0 + 1e-3);
}

ClampedRhs::ClampedRhs(RhsFn inner, double radius)
    : inner_(std::move(inner)), radius_(radius),
      activated_(std::make_shared<bool>(false)) {
    if (!(radius >= 0.0))
        throw model_error("clamp_rhs: radius must be non-negative");
}

void ClampedRhs::operator()(double t, TimeSide side, std::span<const double> y,
                            std::span<double> dy) const {
    const double r = norm2(y);
    if (r <= radius_) {
        inner_(t, side, y, dy);
        return;
    }
    *activated_ = true;
    const double scale = radius_ == 0.0 ? 0.0 : radius_ / r;
    std::vector<double> clamped(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) clamped[i] = scale * y[i];
    inner_(t, side, clamped, dy);
}

namespace {

// One RK4 step over [t, t+h].  Endpoint stages are evaluated one-sided so a
// declared discontinuity at either end never bleeds the wrong branch in.
std::vector<double> rk4_step(const ClampedRhs& f, double t, double h,
                             const std::vector<double>& y) {
    const std::size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n);
    f(t, TimeSide::right, y, k1);
    f(t + 0.5 * h, TimeSide::right, axpy(y, 0.5 * h, k1), k2);
    f(t + 0.5 * h, TimeSide::right, axpy(y, 0.5 * h, k2), k3);
    f(t + h, TimeSide::left, axpy(y, h, k3), k4);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

// One implicit midpoint step, stage equation solved by fixed-point iteration.
std::vector<double> midpoint_step(const ClampedRhs& f, double t, double h,
                                  const std::vector<double>& y) {
    const std::size_t n = y.size();
    std::vector<double> k(n);
    f(t, TimeSide::right, y, k);
    std::vector<double> z = axpy(y, h, k);  // explicit Euler predictor
    const double tm = t + 0.5 * h;
    for (int iter = 0; iter < 50; ++iter) {
        std::vector<double> mid(n);
        for (std::size_t i = 0; i < n; ++i) mid[i] = 0.5 * (y[i] + z[i]);
        f(tm, TimeSide::right, mid, k);
        std::vector<double> znew = axpy(y, h, k);
        double delta = 0.0, scale = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            delta = std::max(delta, std::abs(znew[i] - z[i]));
            scale = std::max(scale, std::abs(znew[i]));
        }
        z = std::move(znew);
        if (delta <= 1e-12 * scale) return z;
    }
    std::ostringstream os;
    os << "integrate: implicit midpoint fixed-point iteration stalled at t = " << t
       << "; the step is too large for this problem's stiffness";
    throw model_error(os.str());
}

} // namespace

Trajectory integrate(const OdeProblem& p, OdeScheme scheme, double dt,
                     std::size_t align) {
    validate_envelope(p.growth);
    if (p.dim == 0 || p.y0.size() != p.dim)
        throw model_error("integrate: initial state does not match the declared dimension");
    if (!(p.horizon > 0.0))
        throw model_error("integrate: horizon must be positive");
    if (!(dt > 0.0))
        throw model_error("integrate: step size must be positive");
    if (!p.rhs)
        throw model_error("integrate: missing right-hand side");

    // Segment mesh: declared breakpoints restricted to (0, horizon).
    std::vector<double> seams{0.0};
    for (double b : p.breakpoints)
        if (b > 0.0 && b < p.horizon) seams.push_back(b);
    seams.push_back(p.horizon);
    std::sort(seams.begin(), seams.end());
    seams.erase(std::unique(seams.begin(), seams.end()), seams.end());

    const double radius = truncation_radius(p);
    ClampedRhs f(p.rhs, radius);

    Trajectory traj;
    traj.radius = radius;
    traj.times.push_back(0.0);
    traj.states.push_back(p.y0);

    std::vector<double> y = p.y0;
    for (std::size_t s = 0; s + 1 < seams.size(); ++s) {
        const double a = seams[s], b = seams[s + 1];
        const auto nsteps = static_cast<std::size_t>(std::ceil((b - a) / dt - 1e-9));
        std::size_t n = std::max<std::size_t>(nsteps, 1);
        // Segments shorter than one alignment block are left alone; rounding
        // them up to `align` steps could multiply the work unboundedly.
        if (align > 1 && n >= align) n = align * ((n + align - 1) / align);
        const double h = (b - a) / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = a + static_cast<double>(i) * h;
            y = scheme == OdeScheme::rk4 ? rk4_step(f, t, h, y)
                                         : midpoint_step(f, t, h, y);
            const double tn = i + 1 == n ? b : t + h;
            for (double v : y)
                if (!std::isfinite(v)) {
                    std::ostringstream os;
                    os << "integrate: state turned non-finite at t = " << tn
                       << "; last finite state recorded at t = " << traj.times.back();
                    throw model_error(os.str());
                }
            if (norm2(y) > radius) {
                std::ostringstream os;
                os << "integrate: growth certificate violated at t = " << tn
                   << " (|y| = " << norm2(y) << " exceeds certified radius "
                   << radius << ")";
                throw model_error(os.str());
            }
            traj.times.push_back(tn);
            traj.states.push_back(y);
            ++traj.steps;
        }
    }
    traj.clamp_activated = f.activated();
    return traj;
}

double residual_check(const OdeProblem& p, const Trajectory& traj) {
    if (traj.times.size() != traj.states.size() || traj.times.empty())
        throw model_error("residual_check: malformed trajectory");
    const std::size_t n = p.dim;
    std::vector<double> acc(n, 0.0);  // running integral of f along the trajectory
    std::vector<double> gi(n), gj(n), gm(n), mid(n);
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < traj.times.size(); ++i) {
        const double h = traj.times[i + 1] - traj.times[i];
        p.rhs(traj.times[i], TimeSide::right, traj.states[i], gi);
        p.rhs(traj.times[i + 1], TimeSide::left, traj.states[i + 1], gj);
        // Hermite midpoint reconstruction, then Simpson over the interval.
        for (std::size_t c = 0; c < n; ++c)
            mid[c] = 0.5 * (traj.states[i][c] + traj.states[i + 1][c]) +
                     (h / 8.0) * (gi[c] - gj[c]);
        p.rhs(traj.times[i] + 0.5 * h, TimeSide::right, mid, gm);
        for (std::size_t c = 0; c < n; ++c)
            acc[c] += (h / 6.0) * (gi[c] + 4.0 * gm[c] + gj[c]);
        double defect = 0.0;
        for (std::size_t c = 0; c < n; ++c) {
            const double d = traj.states[i + 1][c] - traj.states[0][c] - acc[c];
            defect += d * d;
        }
        worst = std::max(worst, std::sqrt(defect));
    }
    return worst;
}

namespace {

double probe_violation(const OdeProblem& p, const RhsFn& f, double radius,
                       bool clamped, std::size_t samples, std::uint64_t seed,
                       double box) {
    UniformSampler rng(seed);
    std::vector<double> y(p.dim), dy(p.dim);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < samples; ++s) {
        const double t = rng.next(0.0, p.horizon);
        for (auto& v : y) v = rng.next(-box, box);
        f(t, TimeSide::right, y, dy);
        const double ny = norm2(y);
        const double cap = clamped ? std::min(ny, radius) : ny;
        const double bound = p.growth.at(t) + p.growth.c0 * cap;
        worst = std::max(worst, norm2(dy) - bound);
    }
    return worst;
}

} // namespace

double probe_growth(const OdeProblem& p, std::size_t samples, std::uint64_t seed,
                    double box) {
    return probe_violation(p, p.rhs, 0.0, false, samples, seed, box);
}

double probe_clamp(const OdeProblem& p, double radius, std::size_t samples,
                   std::uint64_t seed, double box) {
    ClampedRhs f(p.rhs, radius);
    RhsFn wrapped = [f](double t, TimeSide side, std::span<const double> y,
                        std::span<double> dy) { f(t, side, y, dy); };
    return probe_violation(p, wrapped, radius, true, samples, seed, box);
}

} // namespace ohmwell

