#include "ohmwell/basis.hpp"
#include "ohmwell/errors.hpp"
#include "ohmwell/linalg.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace ohmwell {
namespace {

// Raw (pre-orthonormalisation) modes and their derivatives.
double raw_e(int k, double L, double x) {  // k = 0, 1, ...
    return std::sin((k + 1) * std::numbers::pi * x / L);
}
double raw_de(int k, double L, double x) {
    const double f = (k + 1) * std::numbers::pi / L;
    return f * std::cos(f * x);
}
double raw_h(int k, double L, double x) {
    if (k == 0) return 1.0;
    return std::cos(k * std::numbers::pi * x / L);
}
double raw_dh(int k, double L, double x) {
    if (k == 0) return 0.0;
    const double f = k * std::numbers::pi / L;
    return -f * std::sin(f * x);
}

// Weighted quadrature inner product of two nodal sample vectors.
double wdot(const QuadratureGrid& grid, std::span<const double> weight,
            std::span<const double> u, std::span<const double> v) {
    double s = 0.0;
    for (std::size_t q = 0; q < grid.size(); ++q)
        s += grid.weights[q] * weight[q] * u[q] * v[q];
    return s;
}

// Orthonormalise one family in place by modified Gram-Schmidt under the
// weighted inner product, tracking the triangular change of basis.
void orthonormalise(const QuadratureGrid& grid, std::span<const double> weight,
                    std::vector<std::vector<double>>& modes,
                    std::vector<std::vector<double>>& transform,
                    const char* family) {
    const std::size_t m = modes.size();
    transform.assign(m, std::vector<double>(m, 0.0));
    double first_pivot = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        transform[k][k] = 1.0;
        auto project = [&]() {
            for (std::size_t j = 0; j < k; ++j) {
                const double r = wdot(grid, weight, modes[k], modes[j]);
                for (std::size_t q = 0; q < grid.size(); ++q)
                    modes[k][q] -= r * modes[j][q];
                for (std::size_t c = 0; c <= j; ++c)
                    transform[k][c] -= r * transform[j][c];
            }
        };
        project();
        double pivot = std::sqrt(std::max(0.0, wdot(grid, weight, modes[k], modes[k])));
        if (k == 0) {
            first_pivot = pivot;
        } else if (pivot < 1e-6 * first_pivot) {
            project();  // re-orthogonalise the nearly dependent column
            pivot = std::sqrt(std::max(0.0, wdot(grid, weight, modes[k], modes[k])));
        }
        if (!(pivot > 1e-12 * first_pivot)) {
            std::ostringstream os;
            os << "build_basis: " << family << " mode " << k + 1
               << " is numerically dependent (pivot " << pivot
               << "); the quadrature grid does not resolve the basis";
            throw model_error(os.str());
        }
        const double inv = 1.0 / pivot;
        for (std::size_t q = 0; q < grid.size(); ++q) modes[k][q] *= inv;
        for (std::size_t c = 0; c <= k; ++c) transform[k][c] *= inv;
    }
}

// Smallest eigenvalue of the raw weighted Gram; guards against an
// under-resolved grid before Gram-Schmidt runs.
void check_resolution(const QuadratureGrid& grid, std::span<const double> weight,
                      const std::vector<std::vector<double>>& modes, const char* family) {
    const std::size_t m = modes.size();
    std::vector<double> gram(m * m, 0.0);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = k; l < m; ++l) {
            const double g = wdot(grid, weight, modes[k], modes[l]);
            gram[k * m + l] = g;
            gram[l * m + k] = g;
        }
    const double lambda_min = sym_eigenvalues(gram, m).front();
    if (!(lambda_min > 1e-8)) {
        std::ostringstream os;
        os << "build_basis: raw " << family << " Gram is not positive definite "
           << "(smallest eigenvalue " << lambda_min << "); refine the quadrature grid";
        throw model_error(os.str());
    }
}

} // namespace

double raw_electric_mode(int k, double L, double x) { return raw_e(k, L, x); }
double raw_magnetic_mode(int k, double L, double x) { return raw_h(k, L, x); }

double BasisSet::eval_e(int k, double x) const {
    double s = 0.0;
    for (int j = 0; j <= k; ++j) s += e_transform[k][j] * raw_e(j, L, x);
    return s;
}

double BasisSet::eval_h(int k, double x) const {
    double s = 0.0;
    for (int j = 0; j <= k; ++j) s += h_transform[k][j] * raw_h(j, L, x);
    return s;
}

BasisSet build_basis(int m, const QuadratureGrid& grid, const MaterialField& mat) {
    if (m < 1)
        throw config_error("build_basis: mode count must be at least 1, got " + std::to_string(m));
    if (mat.eps.size() != grid.size() || mat.mu.size() != grid.size())
        throw model_error("build_basis: material field was sampled on a different grid");

    BasisSet basis;
    basis.m = m;
    basis.L = grid.L;
    basis.grid = grid;

    const std::size_t n = grid.size();
    basis.phi.assign(m, std::vector<double>(n));
    basis.psi.assign(m, std::vector<double>(n));
    std::vector<std::vector<double>> raw_de_s(m, std::vector<double>(n));
    std::vector<std::vector<double>> raw_dh_s(m, std::vector<double>(n));
    for (int k = 0; k < m; ++k)
        for (std::size_t q = 0; q < n; ++q) {
            basis.phi[k][q] = raw_e(k, grid.L, grid.nodes[q]);
            basis.psi[k][q] = raw_h(k, grid.L, grid.nodes[q]);
            raw_de_s[k][q] = raw_de(k, grid.L, grid.nodes[q]);
            raw_dh_s[k][q] = raw_dh(k, grid.L, grid.nodes[q]);
        }

    check_resolution(grid, mat.eps, basis.phi, "electric");
    check_resolution(grid, mat.mu, basis.psi, "magnetic");

    orthonormalise(grid, mat.eps, basis.phi, basis.e_transform, "electric");
    orthonormalise(grid, mat.mu, basis.psi, basis.h_transform, "magnetic");

    // Derivatives inherit the triangular combination exactly.
    basis.dphi.assign(m, std::vector<double>(n, 0.0));
    basis.dpsi.assign(m, std::vector<double>(n, 0.0));
    for (int k = 0; k < m; ++k)
        for (int j = 0; j <= k; ++j) {
            const double ce = basis.e_transform[k][j];
            const double ch = basis.h_transform[k][j];
            for (std::size_t q = 0; q < n; ++q) {
                basis.dphi[k][q] += ce * raw_de_s[j][q];
                basis.dpsi[k][q] += ch * raw_dh_s[j][q];
            }
        }

    // Coupling C[k][l] = integral phi_k' psi_l dx (no material weight).
    basis.coupling.assign(m, std::vector<double>(m, 0.0));
    std::vector<double> flat(static_cast<std::size_t>(m) * m);
    for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
            double s = 0.0;
            for (std::size_t q = 0; q < n; ++q)
                s += grid.weights[q] * basis.dphi[k][q] * basis.psi[l][q];
            basis.coupling[k][l] = s;
            flat[static_cast<std::size_t>(k) * m + l] = s;
        }
    basis.coupling_norm = spectral_norm(flat, m, m);

    // Unweighted Gram of the orthonormal electric modes.
    std::vector<double> gram(static_cast<std::size_t>(m) * m);
    for (int k = 0; k < m; ++k)
        for (int l = k; l < m; ++l) {
            double s = 0.0;
            for (std::size_t q = 0; q < n; ++q)
                s += grid.weights[q] * basis.phi[k][q] * basis.phi[l][q];
            gram[static_cast<std::size_t>(k) * m + l] = s;
            gram[static_cast<std::size_t>(l) * m + k] = s;
        }
    basis.e_gram_norm = sym_eigenvalues(gram, m).back();

    return basis;
}

std::pair<std::vector<double>, std::vector<double>>
project_initial(const BasisSet& basis, const MaterialField& mat,
                std::span<const double> e0, std::span<const double> h0) {
    const std::size_t n = basis.grid.size();
    if (e0.size() != n || h0.size() != n)
        throw model_error("project_initial: sample vectors do not match the grid size");
    std::vector<double> a(basis.m), b(basis.m);
    for (int k = 0; k < basis.m; ++k) {
        a[k] = wdot(basis.grid, mat.eps, e0, basis.phi[k]);
        b[k] = wdot(basis.grid, mat.mu, h0, basis.psi[k]);
    }
    return {std::move(a), std::move(b)};
}

std::vector<double> synthesize(const BasisSet& basis, std::span<const double> coeffs,
                               FieldKind which) {
    if (coeffs.size() != static_cast<std::size_t>(basis.m))
        throw model_error("synthesize: coefficient count does not match the basis");
    const auto& modes = which == FieldKind::electric ? basis.phi : basis.psi;
    std::vector<double> out(basis.grid.size(), 0.0);
    for (int k = 0; k < basis.m; ++k)
        for (std::size_t q = 0; q < out.size(); ++q)
            out[q] += coeffs[k] * modes[k][q];
    return out;
}

} // namespace ohmwell

