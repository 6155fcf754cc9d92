#include "odl1/numkernel.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace odl1 {

bool is_hermitian(const Mat& a, double tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = a.norm();
  if (scale == 0.0) return true;
  return (a - a.adjoint()).norm() <= tol * scale;
}

namespace {

Eigen::LLT<Mat> checked_llt(const Mat& a, const Index rhs_rows) {
  if (a.rows() != a.cols()) throw ShapeMismatch("spd_solve: A must be square");
  if (a.rows() != rhs_rows)
    throw ShapeMismatch("spd_solve: rhs rows do not match A");
  Eigen::LLT<Mat> llt(a);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("spd_solve: Cholesky factorization failed");
  return llt;
}

}  // namespace

Vec spd_solve(const Mat& a, const Vec& rhs) {
  return checked_llt(a, rhs.rows()).solve(rhs);
}

Mat spd_solve(const Mat& a, const Mat& rhs) {
  return checked_llt(a, rhs.rows()).solve(rhs);
}

std::pair<double, double> extreme_eigenvalues(const Mat& a) {
  if (!is_hermitian(a))
    throw NonHermitian("extreme_eigenvalues: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw Error("extreme_eigenvalues: eigensolver failed");
  const auto& ev = es.eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}

Mat gaussian_matrix(Index rows, Index cols, double stddev, SeededRng& rng) {
  if (rows < 1 || cols < 1 || stddev <= 0.0)
    throw BadShape("gaussian_matrix: rows, cols >= 1 and stddev > 0 required");
  Mat m(rows, cols);
  // Column-major fill so the draw order is part of the fixed format.
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = Scalar(stddev * rng.normal(), 0.0);
  return m;
}

Mat gaussian_matrix_complex(Index rows, Index cols, double stddev,
                            SeededRng& rng) {
  if (rows < 1 || cols < 1 || stddev <= 0.0)
    throw BadShape("gaussian_matrix_complex: bad shape or stddev");
  Mat m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = stddev * rng.normal_complex();
  return m;
}

Vec least_squares(const Mat& a, const Vec& b) {
  if (a.rows() != b.rows())
    throw ShapeMismatch("least_squares: shapes do not agree");
  return a.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
}

}  // namespace odl1
