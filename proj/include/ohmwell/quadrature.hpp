#ifndef OHMWELL_QUADRATURE_HPP
#define OHMWELL_QUADRATURE_HPP

/// @file quadrature.hpp
/// @brief Composite Gauss-Legendre quadrature on [0, L].  All spatial inner
///        products in the solver are evaluated on one of these grids.

#include <cstddef>
#include <vector>

namespace ohmwell {

struct QuadratureGrid {
    double L = 0.0;               ///< domain length
    int points_per_panel = 0;     ///< Gauss-Legendre order q per panel
    int panels = 0;               ///< number of equal panels covering [0, L]
    std::vector<double> nodes;    ///< strictly increasing, inside (0, L)
    std::vector<double> weights;  ///< positive, summing to L

    std::size_t size() const { return nodes.size(); }
};

/// Build a composite Gauss-Legendre grid: `panels` equal subintervals of
/// [0, L], each carrying a q-point rule.  Requires L > 0, 2 <= q <= 16,
/// panels >= 1; throws config_error otherwise.
QuadratureGrid build_grid(double L, int q, int panels);

} // namespace ohmwell

#endif
