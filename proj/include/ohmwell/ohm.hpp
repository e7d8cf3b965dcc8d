#ifndef OHMWELL_OHM_HPP
#define OHMWELL_OHM_HPP

/// @file ohm.hpp
/// @brief Nonlinear Ohm laws j(x,t,xi) = j0(x,t) + j1(x,t,xi) together with
///        sampling-based certificates: linear growth of j1, monotonicity of
///        the field-dependent part, and the pointwise dissipation density.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace ohmwell {

using Vec3 = std::array<double, 3>;

/// Modes of the homogeneous source current j0(x, t).
struct SourceCurrent {
    enum class Kind { zero, constant, product };
    Kind kind = Kind::zero;

    Vec3 amplitude{0.0, 0.0, 0.0};  ///< constant: j0 everywhere

    // product: j0(x,t) = direction * profile(x) * scale(t), with profile
    // piecewise linear through (profile_x, profile_v) and scale piecewise
    // constant: scale(t) = time_values[i] on [time_breaks[i], time_breaks[i+1]).
    Vec3 direction{0.0, 1.0, 0.0};
    std::vector<double> profile_x;
    std::vector<double> profile_v;
    std::vector<double> time_breaks;  ///< one more entry than time_values
    std::vector<double> time_values;
};

/// Side from which a time-dependent quantity is evaluated at one of its
/// declared discontinuities.  Away from breakpoints both sides agree.
enum class TimeSide { left, right };

/// An Ohm law: the built-in families plus tabulated radial laws
/// j1(xi) = M(|xi|) xi / |xi| with M interpolated linearly through
/// (tab_r, tab_m).  `c1` is the declared linear-growth constant of j1 and
/// `monotone` the declared monotonicity claim; both are certified by the
/// check_* routines rather than trusted.
struct OhmLaw {
    enum class Kind { zero, linear, saturating, tabulated };
    Kind kind = Kind::zero;

    double sigma0 = 0.0;  ///< conductivity scale of the built-in laws
    double c1 = 0.0;      ///< declared growth constant: |j1| <= c1 |xi|
    bool monotone = true; ///< declared monotonicity claim

    std::vector<double> tab_r;  ///< tabulated: radii, strictly increasing from 0
    std::vector<double> tab_m;  ///< tabulated: signed magnitudes M(r), M(0) = 0

    SourceCurrent j0;
};

/// j1(x, t, xi): the field-dependent part alone.
Vec3 eval_j1(const OhmLaw& law, double x, double t, const Vec3& xi);

/// Full law j(x, t, xi) = j0(x, t) + j1(x, t, xi).  The TimeSide picks the
/// branch when t is a declared discontinuity of j0.
Vec3 eval_j(const OhmLaw& law, double x, double t, const Vec3& xi,
            TimeSide side = TimeSide::right);

/// j0(x, t) alone.
Vec3 eval_j0(const OhmLaw& law, double x, double t, TimeSide side = TimeSide::right);

/// Pointwise dissipation density j(x,t,xi) . xi.
double dissipation_density(const OhmLaw& law, double x, double t, const Vec3& xi,
                           TimeSide side = TimeSide::right);

struct GrowthSample {
    double x = 0.0;
    double t = 0.0;
    Vec3 xi{0.0, 0.0, 0.0};
};

struct GrowthReport {
    double max_ratio = 0.0;  ///< sup |j1| / |xi| over non-zero samples
    GrowthSample worst;      ///< sample attaining the ratio
    std::size_t tested = 0;  ///< samples with |xi| > 0
    bool vacuous = false;    ///< true when every sample had xi = 0
    bool pass = true;        ///< max_ratio <= c1 (1 + 1e-12)
};

/// Certify |j1(x,t,xi)| <= c1 |xi| on the given samples.
GrowthReport check_growth(const OhmLaw& law, std::span<const GrowthSample> samples);

struct MonotonicityPair {
    double x = 0.0;
    double t = 0.0;
    Vec3 xi{0.0, 0.0, 0.0};
    Vec3 eta{0.0, 0.0, 0.0};
};

struct MonotonicityReport {
    double min_product = 0.0;  ///< inf (j1(xi) - j1(eta)) . (xi - eta)
    MonotonicityPair worst;
    std::size_t tested = 0;
    bool pass = true;  ///< min_product >= -1e-12
};

/// Certify monotonicity of j1 on the given pairs.
MonotonicityReport check_monotonicity(const OhmLaw& law,
                                      std::span<const MonotonicityPair> pairs);

} // namespace ohmwell

#endif
