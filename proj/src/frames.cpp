#include "odl1/frames.hpp"

#include <cmath>
#include <numbers>

namespace odl1 {

namespace {

Eigen::LLT<Mat> gram_factorization(const Frame& frame) {
  const Mat gram = frame.d * frame.d.adjoint();
  const auto [lo, hi] = extreme_eigenvalues(gram);
  if (lo <= 0.0 || hi / lo > 1e12)
    throw RankDeficient("frame: DD* is numerically singular");
  Eigen::LLT<Mat> llt(gram);
  if (llt.info() != Eigen::Success)
    throw RankDeficient("frame: Cholesky of DD* failed");
  return llt;
}

}  // namespace

Frame make_frame(Mat d, double min_lower) {
  if (d.rows() < 1 || d.cols() < d.rows())
    throw BadShape("make_frame: need n >= 1 and d >= n");
  Frame frame;
  frame.complex_valued = d.imag().cwiseAbs().maxCoeff() > 0.0;
  frame.d = std::move(d);
  const auto [lo, hi] = extreme_eigenvalues(frame.d * frame.d.adjoint());
  if (lo < min_lower)
    throw DegenerateFrame("make_frame: lower frame bound below threshold");
  frame.lower = lo;
  frame.upper = hi;
  return frame;
}

Projector::Projector(const Mat& d, Eigen::LLT<Mat> gram_llt)
    : d_(d), gram_llt_(std::move(gram_llt)) {}

Vec Projector::apply(const Vec& v) const {
  if (v.rows() != d_.cols())
    throw ShapeMismatch("Projector::apply: length mismatch");
  return v - d_.adjoint() * gram_llt_.solve(d_ * v);
}

Mat Projector::matrix() const {
  const Index dim = d_.cols();
  return Mat::Identity(dim, dim) - d_.adjoint() * gram_llt_.solve(d_);
}

DualFrame canonical_dual(const Frame& frame) {
  auto llt = gram_factorization(frame);
  DualFrame dual;
  dual.dtilde = llt.solve(frame.d);
  dual.w = Mat::Zero(frame.atoms(), frame.n());
  const auto [lo, hi] = extreme_eigenvalues(dual.dtilde * dual.dtilde.adjoint());
  dual.lower = lo;
  dual.upper = hi;
  return dual;
}

DualFrame general_dual(const Frame& frame, const Mat& w) {
  if (w.rows() != frame.atoms() || w.cols() != frame.n())
    throw ShapeMismatch("general_dual: W must be d x n");
  auto llt = gram_factorization(frame);
  const Mat canonical = llt.solve(frame.d);
  const Mat p = Mat::Identity(frame.atoms(), frame.atoms()) -
                frame.d.adjoint() * canonical;
  DualFrame dual;
  dual.dtilde = canonical + w.adjoint() * p;
  dual.w = w;
  const auto [lo, hi] = extreme_eigenvalues(dual.dtilde * dual.dtilde.adjoint());
  dual.lower = lo;
  dual.upper = hi;
  return dual;
}

Projector null_space_projector(const Frame& frame) {
  return Projector(frame.d, gram_factorization(frame));
}

Frame gabor_frame(Index n, Index oversampling, double window_width) {
  if (n < 2 || n % 2 != 0 || oversampling < 1)
    throw BadLattice("gabor_frame: need even n >= 2 and oversampling >= 1");
  if (window_width <= 0.0)
    throw BadLattice("gabor_frame: window width must be positive");
  const Index n_shifts = n / 2;  // time step alpha = 2 samples
  const Index n_mods = 2 * oversampling;
  const Index d = n_shifts * n_mods;

  // Periodized Gaussian window centered at 0.
  RealVec window(n);
  for (Index t = 0; t < n; ++t) {
    double v = 0.0;
    for (int rep = -2; rep <= 2; ++rep) {
      const double u = static_cast<double>(t) + static_cast<double>(rep) *
                                                    static_cast<double>(n);
      v += std::exp(-u * u / (2.0 * window_width * window_width));
    }
    window[t] = v;
  }

  Mat atoms(n, d);
  const double beta = 1.0 / static_cast<double>(n_mods);
  Index col = 0;
  for (Index k = 0; k < n_shifts; ++k) {
    for (Index l = 0; l < n_mods; ++l, ++col) {
      for (Index t = 0; t < n; ++t) {
        const Index shifted = ((t - 2 * k) % n + n) % n;
        const double phase = 2.0 * std::numbers::pi *
                             static_cast<double>(l) * beta *
                             static_cast<double>(t);
        atoms(t, col) =
            window[shifted] * Scalar(std::cos(phase), std::sin(phase));
      }
      const double norm = atoms.col(col).norm();
      if (norm <= 0.0) throw DegenerateFrame("gabor_frame: zero atom");
      atoms.col(col) /= norm;
    }
  }
  return make_frame(std::move(atoms));
}

Frame spikes_fourier_frame(Index n) {
  if (n < 2) throw BadShape("spikes_fourier_frame: need n >= 2");
  Mat d(n, 2 * n);
  d.leftCols(n) = Mat::Identity(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Index k = 0; k < n; ++k) {
    for (Index j = 0; j < n; ++j) {
      const double phase = -2.0 * std::numbers::pi * static_cast<double>(j) *
                           static_cast<double>(k) / static_cast<double>(n);
      d(j, n + k) = scale * Scalar(std::cos(phase), std::sin(phase));
    }
  }
  return make_frame(std::move(d));
}

SparseSignal random_sparse_signal(const Frame& frame, Index s, SeededRng& rng) {
  if (s < 0 || s > frame.atoms())
    throw BadShape("random_sparse_signal: sparsity out of range");
  SparseSignal sig;
  sig.coefficients = Vec::Zero(frame.atoms());
  sig.support = rng.sample_without_replacement(frame.atoms(), s);
  for (const Index idx : sig.support) {
    sig.coefficients[idx] = frame.complex_valued
                                ? rng.normal_complex()
                                : Scalar(rng.normal(), 0.0);
  }
  sig.signal = frame.d * sig.coefficients;
  return sig;
}

Vec analysis_coefficients(const DualFrame& dual, const Vec& f) {
  if (f.rows() != dual.dtilde.rows())
    throw ShapeMismatch("analysis_coefficients: length mismatch");
  return dual.dtilde.adjoint() * f;
}

}  // namespace odl1
