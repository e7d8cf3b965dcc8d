#include "ohmwell/linalg.hpp"
#include "ohmwell/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ohmwell {

std::vector<double> sym_eigenvalues(std::span<const double> a, std::size_t n) {
    if (a.size() != n * n)
        throw model_error("sym_eigenvalues: matrix size does not match dimension");
    std::vector<double> m(a.begin(), a.end());

    // Cyclic Jacobi: sweep over the strict upper triangle, rotating each
    // off-diagonal entry to zero, until the off-diagonal mass is negligible.
    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                off += m[p * n + q] * m[p * n + q];
        if (off < 1e-300) break;

        double diag = 0.0;
        for (std::size_t p = 0; p < n; ++p) diag += m[p * n + p] * m[p * n + p];
        if (off <= 1e-30 * std::max(diag, 1.0)) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = m[p * n + q];
                if (apq == 0.0) continue;
                const double app = m[p * n + p];
                const double aqq = m[q * n + q];
                const double theta = (aqq - app) / (2.0 * apq);
                // Stable tangent of the rotation angle.
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double mkp = m[k * n + p];
                    const double mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double mpk = m[p * n + k];
                    const double mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
            }
        }
        if (sweep == max_sweeps - 1)
            throw model_error("sym_eigenvalues: Jacobi iteration did not converge");
    }

    std::vector<double> ev(n);
    for (std::size_t p = 0; p < n; ++p) ev[p] = m[p * n + p];
    std::sort(ev.begin(), ev.end());
    return ev;
}

double spectral_norm(std::span<const double> a, std::size_t rows, std::size_t cols) {
    if (a.size() != rows * cols)
        throw model_error("spectral_norm: matrix size does not match dimensions");
    if (rows == 0 || cols == 0) return 0.0;
    std::vector<double> ata(cols * cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            for (std::size_t k = 0; k < cols; ++k)
                ata[j * cols + k] += a[i * cols + j] * a[i * cols + k];
    const auto ev = sym_eigenvalues(ata, cols);
    return std::sqrt(std::max(0.0, ev.back()));
}

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

} // namespace ohmwell

