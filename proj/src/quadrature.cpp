#include "ohmwell/quadrature.hpp"
#include "ohmwell/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ohmwell {
namespace {

// Nodes and weights of the q-point Gauss-Legendre rule on [-1, 1].
// Newton iteration on the Legendre polynomial, seeded with the Chebyshev
// angle approximation; accurate to machine precision for q <= 16.
void reference_rule(int q, std::vector<double>& x, std::vector<double>& w) {
    x.assign(q, 0.0);
    w.assign(q, 0.0);
    for (int i = 0; i < q; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Evaluate P_q(t) and P_q'(t) via the three-term recurrence.
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= q; ++k) {
                const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = q * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[q - 1 - i] = t;
        w[q - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

} // namespace

QuadratureGrid build_grid(double L, int q, int panels) {
    if (!(L > 0.0))
        throw config_error("build_grid: domain length must be positive, got " + std::to_string(L));
    if (q < 2 || q > 16)
        throw config_error("build_grid: points per panel must lie in [2, 16], got " + std::to_string(q));
    if (panels < 1)
        throw config_error("build_grid: panel count must be at least 1, got " + std::to_string(panels));

    std::vector<double> xref, wref;
    reference_rule(q, xref, wref);

    QuadratureGrid grid;
    grid.L = L;
    grid.points_per_panel = q;
    grid.panels = panels;
    grid.nodes.reserve(static_cast<std::size_t>(q) * panels);
    grid.weights.reserve(static_cast<std::size_t>(q) * panels);
    const double h = L / panels;
    for (int p = 0; p < panels; ++p) {
        const double a = p * h;
        for (int i = 0; i < q; ++i) {
            grid.nodes.push_back(a + 0.5 * h * (xref[i] + 1.0));
            grid.weights.push_back(0.5 * h * wref[i]);
        }
    }
    return grid;
}

} // namespace ohmwell

