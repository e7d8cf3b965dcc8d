#ifndef OHMWELL_TEST_ORACLES_HPP
#define OHMWELL_TEST_ORACLES_HPP

// Brute-force reference implementations used to freeze expected values.
// Deliberately independent of the library: plain composite rules and a
// minimal fixed-step integrator, accurate enough to certify the tolerances
// asserted in the tests but sharing no code with the implementation under
// test.

#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

inline double trapezoid(const std::function<double(double)>& f, double a, double b,
                        std::size_t n) {
    const double h = (b - a) / static_cast<double>(n);
    double s = 0.5 * (f(a) + f(b));
    for (std::size_t i = 1; i < n; ++i) s += f(a + static_cast<double>(i) * h);
    return s * h;
}

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      std::size_t n) {
    if (n % 2 != 0) ++n;
    const double h = (b - a) / static_cast<double>(n);
    double s = f(a) + f(b);
    for (std::size_t i = 1; i < n; ++i)
        s += f(a + static_cast<double>(i) * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// Fixed-step classic Runge-Kutta for small systems.
inline std::vector<double> rk4(
    const std::function<std::vector<double>(double, const std::vector<double>&)>& f,
    std::vector<double> y, double t0, double t1, std::size_t n) {
    const double h = (t1 - t0) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t0 + static_cast<double>(i) * h;
        const auto k1 = f(t, y);
        std::vector<double> tmp(y.size());
        for (std::size_t c = 0; c < y.size(); ++c) tmp[c] = y[c] + 0.5 * h * k1[c];
        const auto k2 = f(t + 0.5 * h, tmp);
        for (std::size_t c = 0; c < y.size(); ++c) tmp[c] = y[c] + 0.5 * h * k2[c];
        const auto k3 = f(t + 0.5 * h, tmp);
        for (std::size_t c = 0; c < y.size(); ++c) tmp[c] = y[c] + h * k3[c];
        const auto k4 = f(t + h, tmp);
        for (std::size_t c = 0; c < y.size(); ++c)
            y[c] += (h / 6.0) * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
    }
    return y;
}

} // namespace oracle

#endif
