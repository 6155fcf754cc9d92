#include "odl1/bregman.hpp"

#include <cmath>
#include <limits>

namespace odl1 {

AnalysisOperators make_analysis_operators(const Frame& frame) {
  const Mat gram = frame.d * frame.d.adjoint();
  const auto [lo, hi] = extreme_eigenvalues(gram);
  if (lo <= 0.0 || hi / lo > 1e12)
    throw RankDeficient("make_analysis_operators: DD* numerically singular");
  Eigen::LLT<Mat> llt(gram);
  if (llt.info() != Eigen::Success)
    throw RankDeficient("make_analysis_operators: Cholesky of DD* failed");

  AnalysisOperators ops{frame.d,
                        llt.solve(frame.d),
                        llt.solve(Mat::Identity(frame.n(), frame.n())),
                        Projector(frame.d, llt),
                        false,
                        frame.n() == frame.atoms()};
  ops.parseval = std::abs(frame.lower - 1.0) <= 1e-10 &&
                 std::abs(frame.upper - 1.0) <= 1e-10;
  return ops;
}

SolverState make_initial_state(Index n, Index d, Index m) {
  return SolverState{Vec::Zero(n), Vec::Zero(d), Vec::Zero(d), Vec::Zero(d),
                     Vec::Zero(m), 0};
}

Scalar shrink(Scalar w, double threshold) {
  const double mag = std::abs(w);
  if (mag <= threshold) return Scalar(0.0, 0.0);
  return w * ((mag - threshold) / mag);
}

Vec shrink(const Vec& w, double threshold) {
  if (threshold < 0) throw BadParams("shrink: threshold must be >= 0");
  Vec out(w.rows());
  for (Index i = 0; i < w.rows(); ++i) out[i] = shrink(w[i], threshold);
  return out;
}

StepSystem::StepSystem(const SensingModel& model, const AnalysisOperators& ops,
                       const SolverConfig& config)
    : mu_(config.mu), lambda_(config.lambda) {
  kind_ = config.linear_solver;
  if (kind_ == LinearSolverKind::Auto) {
    const Mat phiphi = model.phi * model.phi.adjoint();
    const bool phi_unitary_rows =
        (phiphi - Mat::Identity(model.m(), model.m())).norm() <= 1e-10;
    kind_ = (phi_unitary_rows && ops.parseval) ? LinearSolverKind::Woodbury
                                               : LinearSolverKind::Dense;
  }
  switch (kind_) {
    case LinearSolverKind::Woodbury:
      phi_ = model.phi;
      break;
    case LinearSolverKind::ConjugateGradient:
      system_ = mu_ * (model.phi.adjoint() * model.phi) + lambda_ * ops.dual_gram;
      break;
    case LinearSolverKind::Dense: {
      const Mat system =
          mu_ * (model.phi.adjoint() * model.phi) + lambda_ * ops.dual_gram;
      llt_.compute(system);
      if (llt_.info() != Eigen::Success)
        throw SingularSystem("StepSystem: system matrix not positive definite");
      break;
    }
    case LinearSolverKind::Auto:
      break;  // unreachable
  }
}

Vec StepSystem::apply(const Vec& rhs) const {
  switch (kind_) {
    case LinearSolverKind::Woodbury:
      // (mu Phi*Phi + lambda I)^{-1} via the matrix inversion lemma when
      // Phi Phi* = I.
      return rhs / lambda_ -
             (mu_ / (lambda_ * (lambda_ + mu_))) *
                 (phi_.adjoint() * (phi_ * rhs));
    case LinearSolverKind::ConjugateGradient: {
      Vec x = Vec::Zero(rhs.rows());
      Vec r = rhs;
      Vec p = r;
      double rs = r.squaredNorm();
      const double target = 1e-10 * rhs.norm();
      for (Index it = 0; it < 4 * rhs.rows() && std::sqrt(rs) > target; ++it) {
        const Vec ap = system_ * p;
        const double alpha = rs / std::real(p.dot(ap));
        x += alpha * p;
        r -= alpha * ap;
        const double rs_next = r.squaredNorm();
        p = r + (rs_next / rs) * p;
        rs = rs_next;
      }
      return x;
    }
    default:
      return llt_.solve(rhs);
  }
}

Vec f_update(const SolverState& state, const SensingModel& model,
             const AnalysisOperators& ops, const Vec& y,
             const StepSystem& system, const SolverConfig& config) {
  const Vec rhs = config.mu * (model.phi.adjoint() * (y - state.c)) +
                  config.lambda * (ops.dual * (state.d - state.pg - state.b));
  return system.apply(rhs);
}

double step_one_residual(const SolverState& state, const SensingModel& model,
                         const AnalysisOperators& ops, const Vec& y,
                         const SolverConfig& config) {
  const Vec grad =
      config.mu * (model.phi.adjoint() * (model.phi * state.f - y + state.c)) +
      config.lambda *
          (ops.dual * (ops.dual.adjoint() * state.f + state.pg - state.d +
                       state.b));
  const double scale =
      config.mu * (model.phi.adjoint() * y).norm() + config.lambda;
  return grad.norm() / scale;
}

void inner_sweep(SolverState& state, const SensingModel& model,
                 const AnalysisOperators& ops, const Vec& y,
                 const StepSystem& system, const SolverConfig& config) {
  state.f = f_update(state, model, ops, y, system, config);
  const Vec analysis = ops.dual.adjoint() * state.f;
  state.d = shrink(analysis + state.pg + state.b, 1.0 / config.lambda);
  if (config.mode == SolverMode::OptimalDual) {
    state.pg = ops.project_null(state.d - analysis - state.b);
  }
  state.b += analysis + state.pg - state.d;
}

RecoveryResult solve(const SensingModel& model, const Vec& y,
                     const AnalysisOperators& ops, const SolverConfig& config,
                     const Vec* truth) {
  config.validate();
  if (y.rows() != model.m() || ops.d.rows() != model.n())
    throw ShapeMismatch("solve: inconsistent shapes");

  const double stop = model.sigma > 0 ? model.epsilon : config.tol;
  const StepSystem system(model, ops, config);

  SolverState state = make_initial_state(model.n(), ops.d.cols(), model.m());
  RecoveryResult result;
  if (truth) result.error_history.emplace();
  const double truth_norm = truth ? truth->norm() : 0.0;

  while (state.outer_index < config.n_outer) {
    for (int sweep = 0; sweep < config.n_inner; ++sweep)
      inner_sweep(state, model, ops, y, system, config);
    const Vec misfit = model.phi * state.f - y;
    state.c += misfit;
    ++state.outer_index;

    const double residual = misfit.norm();
    if (!std::isfinite(residual) || !state.f.allFinite())
      throw NonFinite("solve: non-finite iterate (check mu, lambda)");
    result.residual_history.push_back(residual);
    if (truth) {
      result.error_history->push_back(
          truth_norm > 0 ? (state.f - *truth).norm() / truth_norm
                         : state.f.norm());
    }
    if (residual <= stop) {
      result.converged = true;
      break;
    }
  }
  result.f_hat = state.f;
  result.d_hat = state.d;
  result.outer_iterations_used = state.outer_index;
  return result;
}

double bregman_distance(const std::function<double(const Vec&)>& j,
                        const Vec& u, const Vec& v, const Vec& p) {
  return j(u) - j(v) - std::real(p.dot(u - v));
}

std::vector<Vec> bregman_constrained(
    const std::function<Vec(const Vec& b)>& subproblem, const Mat& phi,
    const Vec& y, double lambda, int max_iters, double tol) {
  if (lambda <= 0) throw BadParams("bregman_constrained: lambda must be > 0");
  std::vector<Vec> history;
  Vec b = Vec::Zero(y.rows());
  double best = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (int k = 0; k < max_iters; ++k) {
    const Vec u = subproblem(b);
    history.push_back(u);
    const Vec misfit = phi * u - y;
    b += misfit;
    const double residual = misfit.norm();
    if (residual <= tol) break;
    if (residual < best * (1.0 - 1e-12)) {
      best = residual;
      stalled = 0;
    } else if (++stalled >= 50) {
      throw NoProgress("bregman_constrained: residual stagnated above tol");
    }
  }
  return history;
}

}  // namespace odl1
