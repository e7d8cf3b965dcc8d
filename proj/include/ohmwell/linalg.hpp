#ifndef OHMWELL_LINALG_HPP
#define OHMWELL_LINALG_HPP

/// @file linalg.hpp
/// @brief Small dense symmetric-matrix helpers used by the basis builder
///        and the hypothesis checks.  Matrices are row-major.

#include <cstddef>
#include <span>
#include <vector>

namespace ohmwell {

/// Eigenvalues of a symmetric n-by-n matrix by the cyclic Jacobi method,
/// returned in ascending order.  Throws model_error if the input is not
/// square or fails to converge.
std::vector<double> sym_eigenvalues(std::span<const double> a, std::size_t n);

/// Spectral norm (largest singular value) of a rows-by-cols matrix,
/// computed as the square root of the largest eigenvalue of A^T A.
double spectral_norm(std::span<const double> a, std::size_t rows, std::size_t cols);

/// Euclidean norm of a vector.
double norm2(std::span<const double> v);

} // namespace ohmwell

#endif
