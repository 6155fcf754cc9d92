#include "odl1/ripanalysis.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace odl1 {

GuaranteeParams make_guarantee_params(Index s, Index a, Index b,
                                      double delta_s_plus_a, double delta_b) {
  GuaranteeParams p;
  p.s = s;
  p.a = a;
  p.b = b;
  p.rho = static_cast<double>(s) / static_cast<double>(b);
  p.delta_s_plus_a = delta_s_plus_a;
  p.delta_b = delta_b;
  return p;
}

namespace {

void validate_common(const GuaranteeParams& p) {
  if (p.s < 1 || p.a < 1 || p.b < 1)
    throw BadParams("guarantee: s, a, b must be positive");
  if (p.b - p.a <= 0 || p.b - p.a > 3 * p.a)
    throw BadParams("guarantee: need 0 < b - a <= 3a");
  if (std::abs(p.rho - static_cast<double>(p.s) / static_cast<double>(p.b)) >
      1e-12)
    throw BadParams("guarantee: rho must equal s/b");
  if (p.kappa < 1.0) throw BadParams("guarantee: kappa must be >= 1");
  if (p.delta_s_plus_a < 0 || p.delta_s_plus_a >= 1 || p.delta_b < 0 ||
      p.delta_b >= 1)
    throw BadParams("guarantee: delta values must lie in [0, 1)");
  if (p.b_upper <= 0 || p.bb_tilde <= 0)
    throw BadParams("guarantee: frame bounds must be positive");
}

GuaranteeReport finish(double k1, double k2) {
  GuaranteeReport r;
  r.k1 = k1;
  r.k2 = k2;
  r.condition_holds = k1 > 0;
  if (r.condition_holds) {
    r.c0 = 2.0 / k1;
    r.c1 = 2.0 * k2 / k1;
  }
  return r;
}

// K1 of Theorem-1 form with free delta inputs, for threshold bisection.
double general_k1(double rho_bbt, double delta_sa, double delta_b) {
  return std::sqrt(1.0 - delta_sa) - std::sqrt(rho_bbt * (1.0 - delta_sa)) -
         std::sqrt(rho_bbt * (1.0 + delta_b));
}

double bisect_threshold(const std::function<double(double)>& k1_of_delta) {
  if (k1_of_delta(0.0) <= 0.0) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    (k1_of_delta(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

unsigned long long binomial_guarded(Index n, Index k) {
  if (k > n) return 0;
  unsigned long long c = 1;
  for (Index i = 0; i < k; ++i) {
    c = c * static_cast<unsigned long long>(n - i) /
        static_cast<unsigned long long>(i + 1);
    if (c > 100'000'000ULL) return c;  // enough to trip the guard
  }
  return c;
}

// Visits every k-subset of {0..n-1} in lexicographic order.
template <typename Fn>
void for_each_subset(Index n, Index k, Fn&& fn) {
  std::vector<Index> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), Index{0});
  while (true) {
    fn(idx);
    Index i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

double isometry_defect(const Mat& cols) {
  const Mat gram = cols.adjoint() * cols;
  Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  return std::max(1.0 - lo, hi - 1.0);
}

}  // namespace

std::tuple<double, double, bool> shifting_inequality_holds(
    const RealVec& a_block, const RealVec& b_block, const RealVec& c_block) {
  const Index r = a_block.size();
  const Index q = b_block.size();
  if (r < 1 || q < 1 || c_block.size() != r || q > 3 * r)
    throw BadBlockSizes("shifting_inequality: need |a| = |c| = r, |b| = q <= 3r");
  RealVec all(2 * r + q);
  all << a_block, b_block, c_block;
  for (Index i = 0; i + 1 < all.size(); ++i)
    if (all[i] < all[i + 1])
      throw NotSorted("shifting_inequality: sequence must be nonincreasing");
  if (all[all.size() - 1] < 0)
    throw NotSorted("shifting_inequality: sequence must be nonnegative");

  const double lhs =
      std::sqrt(b_block.squaredNorm() + c_block.squaredNorm());
  const double rhs = (a_block.sum() + b_block.sum()) /
                     std::sqrt(static_cast<double>(q + r));
  return {lhs, rhs, lhs <= rhs + 1e-12};
}

double rip_constant_bruteforce(const Mat& phi, Index s) {
  const Index n = phi.cols();
  if (s < 1 || s > n) throw BadParams("rip_constant: s out of range");
  if (binomial_guarded(n, s) > 1'000'000ULL)
    throw TooLarge("rip_constant: too many subsets to enumerate");
  double worst = 0.0;
  for_each_subset(n, s, [&](const std::vector<Index>& idx) {
    Mat cols(phi.rows(), s);
    for (Index j = 0; j < s; ++j)
      cols.col(j) = phi.col(idx[static_cast<std::size_t>(j)]);
    worst = std::max(worst, isometry_defect(cols));
  });
  return worst;
}

double drip_constant_bruteforce(const Mat& phi, const Frame& frame, Index s) {
  const Index d = frame.atoms();
  if (s < 1 || s > d) throw BadParams("drip_constant: s out of range");
  if (phi.cols() != frame.n())
    throw ShapeMismatch("drip_constant: Phi columns must match frame dim");
  if (binomial_guarded(d, s) > 1'000'000ULL)
    throw TooLarge("drip_constant: too many subsets to enumerate");
  double worst = 0.0;
  for_each_subset(d, s, [&](const std::vector<Index>& idx) {
    Mat cols(frame.n(), s);
    for (Index j = 0; j < s; ++j)
      cols.col(j) = frame.d.col(idx[static_cast<std::size_t>(j)]);
    // Orthonormal basis of span(D_T); rank can be below s for coherent atoms.
    Eigen::BDCSVD<Mat> svd(cols, Eigen::ComputeThinU);
    const double sv_max = svd.singularValues()[0];
    Index rank = 0;
    while (rank < svd.singularValues().size() &&
           svd.singularValues()[rank] > 1e-12 * sv_max)
      ++rank;
    if (rank == 0) return;
    worst = std::max(worst, isometry_defect(phi * svd.matrixU().leftCols(rank)));
  });
  return worst;
}

GuaranteeReport sufficient_condition_general(const GuaranteeParams& params) {
  validate_common(params);
  const double rho_bbt = params.rho * params.bb_tilde;
  const double k1 =
      general_k1(rho_bbt, params.delta_s_plus_a, params.delta_b);
  const double k2 =
      std::sqrt(params.rho * params.b_upper * (1.0 - params.delta_s_plus_a)) +
      std::sqrt(params.rho * params.b_upper * (1.0 + params.delta_b));
  return finish(k1, k2);
}

GuaranteeReport sufficient_condition_canonical(const GuaranteeParams& params) {
  validate_common(params);
  const double kappa = params.kappa;
  const double rho = params.rho;
  const double b_up = params.b_upper;
  if (rho >= 1.0 / kappa)
    throw RhoTooLarge("canonical condition: requires rho < 1/kappa");
  const double c1 = params.c1 > 0 ? params.c1 : (1.0 - rho * kappa) / kappa;
  const double c2 = params.c2 > 0 ? params.c2 : 1e-3;
  const double bracket =
      1.0 - c1 * kappa / 2.0 - rho * kappa - c2 * rho * std::sqrt(kappa * b_up);
  if (bracket <= 0)
    throw NegativeBracket("canonical condition: 1 - c1 k/2 - rho k - c2 rho sqrt(kB) <= 0");
  const double front = (2.0 * c1 / kappa) * (1.0 - params.delta_s_plus_a);
  const double k1 = std::sqrt(front * bracket) -
                    std::sqrt(rho * kappa * (1.0 + params.delta_b));
  const double k2 =
      std::sqrt(front * (rho * std::sqrt(kappa * b_up) / c2 + rho * b_up)) +
      std::sqrt(rho * b_up * (1.0 + params.delta_b));
  return finish(k1, k2);
}

double best_s_term_tail(const Vec& x, Index s) {
  const Index d = x.size();
  if (s < 0 || s > d) throw BadParams("best_s_term_tail: s out of range");
  std::vector<Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) {
    return std::abs(x[i]) > std::abs(x[j]);
  });
  double tail = 0.0;
  for (Index k = s; k < d; ++k) tail += std::abs(x[order[static_cast<std::size_t>(k)]]);
  return tail;
}

double error_bound(const GuaranteeReport& report, double epsilon, double tail,
                   Index s) {
  if (!report.condition_holds)
    throw ConditionFails("error_bound: sufficient condition does not hold");
  if (s < 1) throw BadParams("error_bound: s must be >= 1");
  return report.c0 * epsilon +
         report.c1 * tail / std::sqrt(static_cast<double>(s));
}

double general_delta_threshold(double rho, double bb_tilde) {
  const double rho_bbt = rho * bb_tilde;
  return bisect_threshold(
      [&](double delta) { return general_k1(rho_bbt, delta, delta); });
}

double general_delta_threshold_substituted(double rho, double bb_tilde,
                                           double k_sa, double k_b) {
  const double rho_bbt = rho * bb_tilde;
  return bisect_threshold([&](double delta) {
    const double dsa = k_sa * delta;
    const double db = k_b * delta;
    if (dsa >= 1.0) return -1.0;
    return general_k1(rho_bbt, dsa, db);
  });
}

ReducedCondition canonical_parseval_reduction(long long p, long long q) {
  if (p < 1 || q <= p)
    throw BadParams("canonical_parseval_reduction: need 0 < p < q");
  const long long g = std::gcd(p, q);
  p /= g;
  q /= g;
  ReducedCondition r;
  r.coeff_s_plus_a = (q - p) * (q - p);
  r.coeff_b = p * q;
  r.rhs = r.coeff_s_plus_a - r.coeff_b;
  if (r.rhs <= 0)
    throw BadParams("canonical_parseval_reduction: condition is vacuous");
  return r;
}

}  // namespace odl1
