#ifndef OHMWELL_MATERIALS_HPP
#define OHMWELL_MATERIALS_HPP

/// @file materials.hpp
/// @brief Material coefficient fields (permittivity/permeability) sampled on
///        a quadrature grid, plus pointwise hypothesis checks for matrix
///        coefficients: symmetry and uniform coercivity.

#include <array>
#include <span>
#include <string>
#include <vector>

namespace ohmwell {

/// Description of one scalar coefficient profile on [0, L].
struct CoefficientSpec {
    enum class Kind { constant, piecewise, table };
    Kind kind = Kind::constant;

    double value = 1.0;  ///< constant: the value everywhere

    /// piecewise: value is pieces[i] on [breaks[i], breaks[i+1]); breaks has
    /// one more entry than pieces and must start at 0 and end at L.
    std::vector<double> breaks;
    std::vector<double> pieces;

    /// table: piecewise-linear interpolation through (x[i], v[i]); x must be
    /// strictly increasing and cover [0, L].
    std::vector<double> x;
    std::vector<double> v;
};

struct MaterialSpec {
    CoefficientSpec eps;
    CoefficientSpec mu;
};

/// Permittivity and permeability sampled on the quadrature nodes, together
/// with the extremes used by coercivity and norm-equivalence estimates.
struct MaterialField {
    std::vector<double> eps;  ///< one value per grid node
    std::vector<double> mu;
    double eps_star = 0.0;  ///< min over nodes (the coercivity constant)
    double mu_star = 0.0;
    double eps_max = 0.0;  ///< max over nodes (the boundedness constant)
    double mu_max = 0.0;
};

/// Sample a material spec on the given nodes.  Every sampled value must be
/// strictly positive; a violation throws model_error naming the offending
/// node.  An empty node list throws model_error.
MaterialField build_material_field(const MaterialSpec& spec, std::span<const double> nodes);

/// A constant 3x3 matrix coefficient with its declared structural claims.
struct Matrix3Coefficient {
    std::array<std::array<double, 3>, 3> entries{};
    bool claim_symmetric = true;
    bool claim_coercive = true;
    double coercivity = 0.0;  ///< declared lower bound on the spectrum
};

struct HypothesisReport {
    double symmetry_defect = 0.0;      ///< max |a_ij - a_ji|
    double smallest_eigenvalue = 0.0;  ///< of the symmetrised matrix
    bool symmetry_pass = true;         ///< defect <= tol whenever claimed
    bool coercivity_pass = true;       ///< eigenvalue >= declared bound
};

/// Check the declared symmetry/coercivity claims of a matrix coefficient.
/// Symmetry is tested against `sym_tol`; coercivity compares the smallest
/// eigenvalue of the symmetric part against the declared constant.
HypothesisReport check_hypotheses_pointwise(const Matrix3Coefficient& m, double sym_tol = 1e-12);

} // namespace ohmwell

#endif
