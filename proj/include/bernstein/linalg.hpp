#pragma once

#include <cstddef>
#include <vector>

namespace bernstein {

/// Dense row-major matrix as a vector of rows; every system this library
/// solves is tiny (at most ~21 x 21), so clarity beats performance here.
using MatrixRows = std::vector<std::vector<double>>;

/// Result of a one-dimensional kernel extraction.
struct KernelResult {
    std::vector<double> vector;   // unit-norm kernel vector (empty on failure)
    bool unique = false;          // kernel dimension is exactly one
    double gap = 0.0;             // smallest/largest singular value of the matrix
    double residual = 0.0;        // max_j |row_j . v| / ||row_j||  (v unit norm)
};

/// Kernel of an r x (r+1) matrix via singular value decomposition. The kernel
/// is unique iff the smallest of the r singular values stays above
/// rank_tol times the largest.
[[nodiscard]] KernelResult svd_kernel(const MatrixRows& rows, double rank_tol);

/// Same contract computed through a full-pivot LU factorization; an
/// algorithmically independent route used to cross-check kernel uniqueness.
[[nodiscard]] KernelResult lu_kernel(const MatrixRows& rows, double rank_tol);

/// Solve the square system A x = rhs by full-pivot LU.
/// Returns an empty vector when A is numerically singular.
[[nodiscard]] std::vector<double> solve_dense(const MatrixRows& a, const std::vector<double>& rhs);

/// Indices of `want` columns chosen by column-pivoted QR (largest pivots
/// first), sorted ascending. Returns fewer than `want` indices when the
/// numerical rank (threshold rank_tol relative) is deficient.
[[nodiscard]] std::vector<std::size_t> pivot_columns(const MatrixRows& rows, std::size_t want,
                                                     double rank_tol);

}  // namespace bernstein
