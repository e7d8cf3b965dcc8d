#ifndef OHMWELL_BASIS_HPP
#define OHMWELL_BASIS_HPP

/// @file basis.hpp
/// @brief Spectral Galerkin bases on [0, L].  Electric modes are built from
///        sin(k pi x / L) (they vanish at both endpoints), magnetic modes
///        from {1, cos(k pi x / L)}.  Each family is orthonormalised with
///        respect to its material-weighted inner product by modified
///        Gram-Schmidt evaluated under the quadrature rule, so discrete
///        orthonormality holds to rounding even for rough coefficients.

#include "ohmwell/materials.hpp"
#include "ohmwell/quadrature.hpp"

#include <span>
#include <utility>
#include <vector>

namespace ohmwell {

enum class FieldKind { electric, magnetic };

/// Raw (pre-orthonormalisation) mode k, 0-based: sin((k+1) pi x / L) for the
/// electric family, 1 (k = 0) or cos(k pi x / L) for the magnetic family.
double raw_electric_mode(int k, double L, double x);
double raw_magnetic_mode(int k, double L, double x);

struct BasisSet {
    int m = 0;     ///< number of modes per family
    double L = 0.0;
    QuadratureGrid grid;

    // Orthonormalised mode samples on the grid nodes, [mode][node].
    std::vector<std::vector<double>> phi;   ///< electric modes, (eps phi_k, phi_l) = delta
    std::vector<std::vector<double>> dphi;  ///< their spatial derivatives
    std::vector<std::vector<double>> psi;   ///< magnetic modes, (mu psi_k, psi_l) = delta
    std::vector<std::vector<double>> dpsi;

    // Lower-triangular change of basis from the raw trigonometric modes:
    // phi_k = sum_{j<=k} e_transform[k][j] raw_e_j, likewise h_transform.
    // Derivatives and off-grid evaluations use the same coefficients.
    std::vector<std::vector<double>> e_transform;
    std::vector<std::vector<double>> h_transform;

    /// Coupling matrix C[k][l] = integral of phi_k' psi_l (unweighted).
    std::vector<std::vector<double>> coupling;
    double coupling_norm = 0.0;  ///< spectral norm of C

    /// Largest eigenvalue of the unweighted quadrature Gram of the phi
    /// family; enters the growth certificate of the assembled ODE.
    double e_gram_norm = 0.0;

    /// Evaluate mode k (0-based) at an arbitrary point of [0, L] through the
    /// stored transform and the analytic raw modes.
    double eval_e(int k, double x) const;
    double eval_h(int k, double x) const;
};

/// Build the orthonormal bases.  Preconditions: m >= 1, the grid resolves
/// the modes (the raw Gram under the weighted inner product must have
/// smallest eigenvalue > 1e-8), material sampled on the same grid.  Modified
/// Gram-Schmidt re-orthogonalises a column when its pivot falls below 1e-6
/// of the first pivot; a pivot collapse raises model_error.
BasisSet build_basis(int m, const QuadratureGrid& grid, const MaterialField& mat);

/// Weighted L2 projection of nodal samples onto the basis:
/// a_k = (eps e0, phi_k), b_k = (mu h0, psi_k).  Sample vectors must match
/// the grid size.
std::pair<std::vector<double>, std::vector<double>>
project_initial(const BasisSet& basis, const MaterialField& mat,
                std::span<const double> e0, std::span<const double> h0);

/// Nodal samples of sum_k coeffs[k] * mode_k.
std::vector<double> synthesize(const BasisSet& basis, std::span<const double> coeffs,
                               FieldKind which);

} // namespace ohmwell

#endif
