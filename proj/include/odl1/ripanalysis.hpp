#pragma once

#include <tuple>

#include "odl1/frames.hpp"
#include "odl1/types.hpp"

namespace odl1 {

// Inputs to the recovery-guarantee evaluators. `b_upper` is the upper frame
// bound B of the primal frame (needed by K2 on its own; defaults to the
// Parseval value 1). c1 <= 0 requests the default choice.
struct GuaranteeParams {
  Index s = 0;
  Index a = 0;
  Index b = 0;
  double rho = 0.0;      // s / b
  double kappa = 1.0;    // B / A
  double b_upper = 1.0;  // B
  double bb_tilde = 1.0; // B * Btilde
  double c1 = 0.0;
  double c2 = 0.0;
  double delta_s_plus_a = 0.0;
  double delta_b = 0.0;
};

GuaranteeParams make_guarantee_params(Index s, Index a, Index b,
                                      double delta_s_plus_a, double delta_b);

struct GuaranteeReport {
  bool condition_holds = false;
  double k1 = 0.0;
  double k2 = 0.0;
  double c0 = 0.0;
  double c1 = 0.0;
};

// Shifting inequality for a nonincreasing nonnegative sequence split into
// blocks a (length r), b (length q <= 3r), c (length r):
// sqrt(sum b^2 + sum c^2) <= (sum a + sum b) / sqrt(q + r).
// Returns (lhs, rhs, holds).
std::tuple<double, double, bool> shifting_inequality_holds(
    const RealVec& a_block, const RealVec& b_block, const RealVec& c_block);

// Exact restricted-isometry constant by enumerating all s-subsets of the
// columns of Phi. Guarded: throws TooLarge when C(n, s) > 10^6.
double rip_constant_bruteforce(const Mat& phi, Index s);

// Restricted-isometry constant adapted to the dictionary D: the extremum is
// taken over unit vectors in the span of every s columns of D, realized via
// an orthonormal basis of each span.
double drip_constant_bruteforce(const Mat& phi, const Frame& frame, Index s);

// Alternative-dual sufficient condition and its error-bound constants:
// K1 = sqrt(1-d_{s+a}) - sqrt(rho BBt (1-d_{s+a})) - sqrt(rho BBt (1+d_b)),
// K2 = sqrt(rho B (1-d_{s+a})) + sqrt(rho B (1+d_b)).
GuaranteeReport sufficient_condition_general(const GuaranteeParams& params);

// Canonical-dual condition with free parameters c1, c2 > 0; c1 defaults to
// its optimizer (1 - rho kappa)/kappa, c2 defaults to 1e-3.
GuaranteeReport sufficient_condition_canonical(const GuaranteeParams& params);

// l1 norm of x with its s largest-magnitude entries removed (ties keep the
// lowest index among the retained entries).
double best_s_term_tail(const Vec& x, Index s);

// C0 * epsilon + C1 * tail / sqrt(s); requires report.condition_holds.
double error_bound(const GuaranteeReport& report, double epsilon, double tail,
                   Index s);

// Largest delta (delta_{s+a} = delta_b = delta) with K1(delta) > 0 in the
// alternative-dual condition, found by bisection to 1e-6.
double general_delta_threshold(double rho, double bb_tilde);

// Same after the substitution delta_{s+a} <= k_sa * delta, delta_b <= k_b *
// delta (delta_{ks} <= k delta_{2s}); used to express thresholds in delta_2s.
double general_delta_threshold_substituted(double rho, double bb_tilde,
                                           double k_sa, double k_b);

// Parseval canonical reduction for rho = p/q in lowest terms: integer
// coefficients (alpha, beta, gamma) of alpha*delta_{s+a} + beta*delta_b <
// gamma obtained by clearing denominators in the condition.
struct ReducedCondition {
  long long coeff_s_plus_a = 0;
  long long coeff_b = 0;
  long long rhs = 0;
};
ReducedCondition canonical_parseval_reduction(long long p, long long q);

}  // namespace odl1
