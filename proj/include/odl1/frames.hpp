#pragma once

#include <Eigen/Cholesky>
#include <vector>

#include "odl1/numkernel.hpp"
#include "odl1/rng.hpp"
#include "odl1/types.hpp"

namespace odl1 {

// A frame of R^n / C^n given by the columns of D (n x d, n <= d) together
// with its cached frame bounds: A and B are the extreme eigenvalues of DD*.
struct Frame {
  Mat d;             // synthesis operator, n x d
  double lower = 0;  // A
  double upper = 0;  // B
  bool complex_valued = false;

  Index n() const { return d.rows(); }
  Index atoms() const { return d.cols(); }
};

// Build a frame from an explicit matrix, computing and caching the bounds.
// Throws DegenerateFrame when the lower bound is below `min_lower`.
Frame make_frame(Mat d, double min_lower = 1e-10);

// A dual frame Dtilde with D Dtilde* = I, remembering the generating
// perturbation W (W = 0 for the canonical dual).
struct DualFrame {
  Mat dtilde;  // n x d
  Mat w;       // d x n
  double lower = 0;
  double upper = 0;
};

// Orthogonal projector onto the null space of D. The projector is applied
// implicitly (two synthesis products and a small solve); the dense d x d
// matrix is materialized only on request.
class Projector {
 public:
  Projector(const Mat& d, Eigen::LLT<Mat> gram_llt);

  Index dim() const { return d_.cols(); }

  // P v = v - D* (DD*)^{-1} (D v)
  Vec apply(const Vec& v) const;

  // Dense P = I_d - D* (DD*)^{-1} D.
  Mat matrix() const;

 private:
  Mat d_;
  Eigen::LLT<Mat> gram_llt_;
};

struct SparseSignal {
  Vec coefficients;            // x, length d
  std::vector<Index> support;  // indices of the nonzeros
  Vec signal;                  // f = D x, length n
};

// Canonical dual (DD*)^{-1} D with bounds (1/B, 1/A).
// Throws RankDeficient when DD* is numerically singular (condition > 1e12).
DualFrame canonical_dual(const Frame& frame);

// General dual D~ = (DD*)^{-1} D + W* (I - D*(DD*)^{-1}D) for a d x n W.
DualFrame general_dual(const Frame& frame, const Mat& w);

Projector null_space_projector(const Frame& frame);

// Gabor dictionary on the discrete circle of length n: atoms
// g_{l,k}(t) = g(t - k*alpha) exp(2*pi*i*l*beta*t) with a periodized Gaussian
// window of the given width, each atom normalized to unit l2 norm.
// Lattice: n/2 time shifts (alpha = 2) by 2*oversampling modulations, so
// d = oversampling * n.
Frame gabor_frame(Index n, Index oversampling, double window_width);

// Concatenation of the coordinate and unitary Fourier bases, D = [I, F].
// Tight frame with bounds A = B = 2.
Frame spikes_fourier_frame(Index n);

// Coefficients with s uniformly chosen support positions and standard
// Gaussian nonzeros (complex frames: circular, unit total variance), plus
// the synthesized signal f = D x.
SparseSignal random_sparse_signal(const Frame& frame, Index s, SeededRng& rng);

// Analysis map Dtilde* f.
Vec analysis_coefficients(const DualFrame& dual, const Vec& f);

}  // namespace odl1
