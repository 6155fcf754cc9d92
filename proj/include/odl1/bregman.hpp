#pragma once

#include <Eigen/Cholesky>
#include <functional>
#include <optional>
#include <vector>

#include "odl1/frames.hpp"
#include "odl1/sensing.hpp"
#include "odl1/types.hpp"

namespace odl1 {

enum class SolverMode { OptimalDual, CanonicalAnalysis };
enum class LinearSolverKind { Auto, Dense, Woodbury, ConjugateGradient };

// Default penalty weights are calibrated for sensing operators normalized so
// that ||Phi f|| ~ ||f|| (as produced by this library); equal unit weights
// suit unnormalized Gaussian matrices whose fidelity term is ~m times larger.
struct SolverConfig {
  double mu = 10.0;
  double lambda = 5.0;
  int n_inner = 30;
  int n_outer = 200;
  double tol = 1e-6;
  SolverMode mode = SolverMode::OptimalDual;
  LinearSolverKind linear_solver = LinearSolverKind::Auto;

  void validate() const {
    if (mu <= 0 || lambda <= 0)
      throw BadParams("SolverConfig: mu and lambda must be positive");
    if (n_inner < 1 || n_outer < 1)
      throw BadParams("SolverConfig: n_inner and n_outer must be >= 1");
    if (tol < 0) throw BadParams("SolverConfig: tol must be >= 0");
  }
};

// Frame machinery precomputed once per frame and shared across solves:
// canonical dual, its Gram (DD*)^{-1}, and the null-space projector.
struct AnalysisOperators {
  Mat d;             // n x d synthesis operator
  Mat dual;          // canonical dual (DD*)^{-1} D, n x d
  Mat dual_gram;     // dual * dual^adj = (DD*)^{-1}, n x n
  Projector projector;
  bool parseval = false;
  bool square = false;  // d == n, trivial null space

  Vec project_null(const Vec& v) const {
    return square ? Vec(Vec::Zero(v.rows())) : projector.apply(v);
  }
};

AnalysisOperators make_analysis_operators(const Frame& frame);

struct SolverState {
  Vec f;   // signal iterate, length n
  Vec d;   // split coefficient iterate, length d
  Vec pg;  // P g, always in null(D)
  Vec b;   // inner Bregman variable
  Vec c;   // outer Bregman variable, length m
  int outer_index = 0;
};

SolverState make_initial_state(Index n, Index d, Index m);

struct RecoveryResult {
  Vec f_hat;
  Vec d_hat;
  std::vector<double> residual_history;            // ||Phi f^k - y||_2
  std::optional<std::vector<double>> error_history;  // vs known truth
  int outer_iterations_used = 0;
  bool converged = false;
};

// Elementwise soft shrinkage: w_i/|w_i| * max(|w_i| - threshold, 0).
Vec shrink(const Vec& w, double threshold);
Scalar shrink(Scalar w, double threshold);

// Applies (mu Phi* Phi + lambda Dbar Dbar*)^{-1}, factored once per solve.
class StepSystem {
 public:
  StepSystem(const SensingModel& model, const AnalysisOperators& ops,
             const SolverConfig& config);

  Vec apply(const Vec& rhs) const;
  LinearSolverKind kind() const { return kind_; }

 private:
  LinearSolverKind kind_;
  double mu_ = 0, lambda_ = 0;
  Mat phi_;         // Woodbury / CG paths
  Mat system_;      // CG path
  Eigen::LLT<Mat> llt_;  // dense path
};

// Step-1 update: f = (mu Phi*Phi + lambda Dbar Dbar*)^{-1}
//                    [mu Phi*(y - c) + lambda Dbar (d - pg - b)].
Vec f_update(const SolverState& state, const SensingModel& model,
             const AnalysisOperators& ops, const Vec& y,
             const StepSystem& system, const SolverConfig& config);

// Residual of the step-1 optimality condition
// mu Phi*(Phi f - y + c) + lambda Dbar (Dbar* f + pg - d + b).
double step_one_residual(const SolverState& state, const SensingModel& model,
                         const AnalysisOperators& ops, const Vec& y,
                         const SolverConfig& config);

// One inner sweep in the order f -> d -> pg -> b, each step consuming the
// newest iterates; CanonicalAnalysis pins pg to zero.
void inner_sweep(SolverState& state, const SensingModel& model,
                 const AnalysisOperators& ops, const Vec& y,
                 const StepSystem& system, const SolverConfig& config);

// Full solve: n_inner sweeps then c += Phi f - y per outer iteration, until
// k >= n_outer or ||Phi f - y||_2 <= the stopping threshold (the model's
// epsilon when sigma > 0, else config.tol). When `truth` is given the
// relative error per outer iteration is recorded.
RecoveryResult solve(const SensingModel& model, const Vec& y,
                     const AnalysisOperators& ops, const SolverConfig& config,
                     const Vec* truth = nullptr);

// Bregman distance J(u) - J(v) - <u - v, p> for a subgradient p at v.
double bregman_distance(const std::function<double(const Vec&)>& j,
                        const Vec& u, const Vec& v, const Vec& p);

// Constrained Bregman iteration in simplified form:
//   u^{k+1} = argmin J(u) + (lambda/2) ||Phi u - y + b^k||^2,
//   b^{k+1} = b^k + (Phi u^{k+1} - y),
// run until ||Phi u - y|| <= tol. Returns the iterate history.
// Throws NoProgress if the residual stagnates above tol for 50 iterations.
std::vector<Vec> bregman_constrained(
    const std::function<Vec(const Vec& b)>& subproblem, const Mat& phi,
    const Vec& y, double lambda, int max_iters, double tol);

}  // namespace odl1
