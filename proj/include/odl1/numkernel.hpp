#pragma once

#include <utility>

#include "odl1/rng.hpp"
#include "odl1/types.hpp"

namespace odl1 {

// Dense linear-algebra foundation. Contracts (residual tolerances, error
// behaviour) are fixed here; the implementation is backed by Eigen.

// True when the relative asymmetry of A is at most `tol`.
bool is_hermitian(const Mat& a, double tol = 1e-12);

// Solve A x = rhs for Hermitian positive definite A via Cholesky.
// Throws NotPositiveDefinite when the factorization fails.
Vec spd_solve(const Mat& a, const Vec& rhs);
Mat spd_solve(const Mat& a, const Mat& rhs);

// Extreme eigenvalues (lambda_min, lambda_max) of a Hermitian matrix.
// Throws NonHermitian when the relative asymmetry exceeds 1e-12.
std::pair<double, double> extreme_eigenvalues(const Mat& a);

// rows x cols matrix with i.i.d. real N(0, stddev^2) entries (zero imaginary
// part), deterministic given the rng state.
Mat gaussian_matrix(Index rows, Index cols, double stddev, SeededRng& rng);

// Same with circularly symmetric complex entries of total variance stddev^2.
Mat gaussian_matrix_complex(Index rows, Index cols, double stddev,
                            SeededRng& rng);

// Minimum-norm least-squares solution of A x = b (used as an independent
// oracle by tests as well as by the frame constructions).
Vec least_squares(const Mat& a, const Vec& b);

}  // namespace odl1
