// End-to-end acceptance checks for the library: published constants and
// thresholds, the qualitative gap between the two solver modes, recovery
// quality on the Gabor setup, noise linearity, the sparsity threshold
// effect, the noise-bound failure frequency, and the property suites.
// Each criterion prints a single PASS/FAIL line; the exit code is nonzero
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "odl1/bregman.hpp"
#include "odl1/experiments.hpp"
#include "odl1/frames.hpp"
#include "odl1/numkernel.hpp"
#include "odl1/ripanalysis.hpp"
#include "odl1/sensing.hpp"

using namespace odl1;

namespace {

int g_failures = 0;

void report(int index, const std::string& name, bool pass,
            const std::string& detail, double seconds) {
  std::printf("%s  criterion %d (%s): %s  [%.1fs]\n", pass ? "PASS" : "FAIL",
              index, name.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void run(int index, const std::string& name,
         const std::function<std::pair<bool, std::string>()>& body) {
  const auto start = std::chrono::steady_clock::now();
  bool pass = false;
  std::string detail;
  try {
    std::tie(pass, detail) = body();
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  report(index, name, pass, detail, seconds);
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

// ---- criterion 1: constant reproduction -----------------------------------

std::pair<bool, std::string> constants_reproduction() {
  GuaranteeParams p = make_guarantee_params(1, 1, 4, 0.25, 0.25);
  p.kappa = 1.0;
  p.b_upper = 1.0;
  p.c1 = 29.0 / 40.0;
  p.c2 = 0.1;
  const GuaranteeReport quarter = sufficient_condition_canonical(p);
  p.delta_s_plus_a = 0.125;
  p.delta_b = 0.125;
  const GuaranteeReport eighth = sufficient_condition_canonical(p);
  const bool pass = std::abs(quarter.c0 - 29.1) <= 0.5 &&
                    std::abs(quarter.c1 - 66.5) <= 0.5 &&
                    std::abs(eighth.c0 - 13.6) <= 0.5 &&
                    std::abs(eighth.c1 - 32.5) <= 0.5;
  return {pass, fmt("C0=%.3f C1=%.3f (delta 1/4), C0=%.3f C1=%.3f (delta 1/8)",
                    quarter.c0, quarter.c1, eighth.c0, eighth.c1)};
}

// ---- criterion 2: threshold reproduction -----------------------------------

std::pair<bool, std::string> threshold_reproduction() {
  const double t1 = general_delta_threshold_substituted(1.0 / 12.0, 1.0, 4.0, 12.0);
  const double t2 = general_delta_threshold(0.125, 1.0);
  const double t3 = general_delta_threshold(0.125, std::sqrt(2.0));
  const ReducedCondition red = canonical_parseval_reduction(1, 4);
  const bool pass = std::abs(t1 - 0.1398) <= 0.001 &&
                    std::abs(t2 - 0.5395) <= 0.001 &&
                    std::abs(t3 - 0.3104) <= 0.001 &&
                    red.coeff_s_plus_a == 9 && red.coeff_b == 4 && red.rhs == 5;
  return {pass, fmt("substituted=%.5f, unit=%.5f, sqrt2=%.5f, reduction %lld/%lld/%lld",
                    t1, t2, t3, red.coeff_s_plus_a, red.coeff_b, red.rhs)};
}

// ---- criteria 3 & 4: mode gap and Gabor recovery ---------------------------

struct GapCounts {
  int qualifying = 0;
  int trials = 0;
  double worst_od = 0.0;
};

std::pair<bool, std::string> spikes_fourier_gap() {
  ExperimentConfig cfg;
  cfg.dictionary = DictionaryKind::SpikesFourier;
  cfg.n = 128;
  cfg.m = 32;
  cfg.sparsity = 7;
  cfg.sigma = 0.0;
  cfg.solver.mu = 1.0;
  cfg.solver.lambda = 1.0;
  cfg.solver.n_inner = 15;
  cfg.solver.n_outer = 100;
  cfg.solver.tol = 1e-12;
  cfg.base_seed = 1;
  const Frame frame = build_dictionary(cfg);
  const AnalysisOperators ops = make_analysis_operators(frame);

  int good = 0;
  const int trials = 20;
  for (int t = 0; t < trials; ++t) {
    const double od =
        run_trial(cfg, ops, frame, t, SolverMode::OptimalDual).relative_error;
    const double canon =
        run_trial(cfg, ops, frame, t, SolverMode::CanonicalAnalysis)
            .relative_error;
    if (od < 1e-2 && std::abs(canon - 0.8) <= 0.15) ++good;
  }
  return {good >= 18, fmt("%d/%d trials with optimal-dual < 1e-2 and "
                          "canonical within 0.8 +- 0.15", good, trials)};
}

std::pair<bool, std::string> gabor_recovery() {
  ExperimentConfig cfg;  // defaults: Gabor n=128, oversampling 20, m=32, s=7
  cfg.solver.n_inner = 30;
  cfg.solver.n_outer = 200;
  cfg.solver.tol = 1e-6;
  const Frame frame = build_dictionary(cfg);
  const AnalysisOperators ops = make_analysis_operators(frame);

  int good = 0;
  const int trials = 20;
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const double od =
        run_trial(cfg, ops, frame, t, SolverMode::OptimalDual).relative_error;
    const double canon =
        run_trial(cfg, ops, frame, t, SolverMode::CanonicalAnalysis)
            .relative_error;
    worst = std::max(worst, od);
    if (od < 1e-3 && od < canon) ++good;
  }
  return {good >= 16,
          fmt("%d/%d trials with optimal-dual < 1e-3 and below canonical "
              "(worst optimal-dual %.2e)", good, trials, worst)};
}

// ---- criterion 5: noise linearity ------------------------------------------

std::pair<bool, std::string> noise_linearity() {
  ExperimentConfig cfg;  // Gabor defaults
  cfg.trials = 5;
  std::vector<double> levels;
  for (int i = 0; i < 10; ++i)
    levels.push_back(0.01 * std::pow(15.0, i / 9.0));
  const SweepResult sweep =
      run_noise_sweep(cfg, levels, {SolverMode::OptimalDual});
  std::vector<double> x, y;
  for (const auto& row : sweep.rows) {
    x.push_back(row.level);
    y.push_back(row.mean_optimal_dual);
  }
  const LinearFit fit = linear_fit(x, y);
  const bool pass = fit.r_squared >= 0.95 && fit.slope > 0.0;
  return {pass, fmt("R^2=%.4f slope=%.3f over %zu levels", fit.r_squared,
                    fit.slope, x.size())};
}

// ---- criterion 6: sparsity threshold ----------------------------------------

std::pair<bool, std::string> sparsity_threshold() {
  ExperimentConfig cfg;  // Gabor defaults
  cfg.trials = 20;
  const std::vector<double> rhos{0.1, 0.2, 0.5};
  const SweepResult sweep =
      run_sparsity_sweep(cfg, rhos, {SolverMode::OptimalDual});
  const double e1 = sweep.rows[0].mean_optimal_dual;
  const double e2 = sweep.rows[1].mean_optimal_dual;
  const double e5 = sweep.rows[2].mean_optimal_dual;
  const bool pass = e1 < 0.05 && e2 < 0.05 && e5 > e2;
  return {pass, fmt("mean error %.4f @0.1, %.4f @0.2, %.4f @0.5", e1, e2, e5)};
}

// ---- criterion 7: noise bound frequency --------------------------------------

std::pair<bool, std::string> noise_bound_frequency() {
  const Index m = 32;
  const double sigma = 1.0;
  const double bound = gaussian_noise_bound(m, sigma);
  SeededRng rng(424242);
  const int draws = 10000;
  int exceed = 0;
  for (int t = 0; t < draws; ++t) {
    double sq = 0.0;
    for (Index i = 0; i < m; ++i) {
      const double z = sigma * rng.normal();
      sq += z * z;
    }
    if (std::sqrt(sq) > bound) ++exceed;
  }
  const double freq = static_cast<double>(exceed) / draws;
  const double p = 1.0 / static_cast<double>(m);
  const double slack = 3.0 * std::sqrt(p * (1.0 - p) / draws);
  return {freq <= p + slack,
          fmt("frequency %.4f vs allowance %.4f", freq, p + slack)};
}

// ---- criterion 8: property suites --------------------------------------------

bool prop_dual_identity(std::string& note) {
  SeededRng rng(777);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 4 + static_cast<Index>(rng.below(6));
    const Index atoms = n + 2 + static_cast<Index>(rng.below(10));
    const Frame f = make_frame(gaussian_matrix(n, atoms, 1.0, rng));
    const Mat w = gaussian_matrix(atoms, n, 1.0, rng);
    const DualFrame dual = general_dual(f, w);
    const double err =
        (f.d * dual.dtilde.adjoint() - Mat::Identity(n, n)).cwiseAbs().maxCoeff();
    if (err > 1e-10) {
      note = fmt("dual identity residual %.2e at trial %d", err, trial);
      return false;
    }
  }
  return true;
}

bool prop_shrink_prox(std::string& note) {
  SeededRng rng(778);
  for (int trial = 0; trial < 1000; ++trial) {
    const double lambda = 0.25 + 4.0 * rng.uniform();
    const Scalar w = (trial % 2 == 0)
                         ? Scalar(3.0 * rng.normal(), 0.0)
                         : Scalar(3.0 * rng.normal(), 3.0 * rng.normal());
    const Scalar fast = shrink(w, 1.0 / lambda);
    // Brute-force proximal minimizer by refined grid search.
    Scalar center(0.0, 0.0);
    double half = std::max(1.5 * std::abs(w), 1.0);
    const int g = 20;
    for (int stage = 0; stage < 12; ++stage) {
      double best_val = std::numeric_limits<double>::infinity();
      Scalar best_pt = center;
      for (int i = -g; i <= g; ++i) {
        for (int j = -g; j <= g; ++j) {
          const Scalar z = center + Scalar(i * half / g, j * half / g);
          const double v = std::abs(z) + 0.5 * lambda * std::norm(z - w);
          if (v < best_val) {
            best_val = v;
            best_pt = z;
          }
        }
      }
      center = best_pt;
      half *= 3.0 / g;
    }
    if (std::abs(fast - center) > 1e-6) {
      note = fmt("shrink/prox gap %.2e at trial %d", std::abs(fast - center),
                 trial);
      return false;
    }
  }
  return true;
}

bool prop_shifting_fuzz(std::string& note) {
  SeededRng rng(779);
  for (int trial = 0; trial < 10000; ++trial) {
    const Index r = 1 + static_cast<Index>(rng.below(4));
    const Index q =
        1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(3 * r)));
    RealVec all(2 * r + q);
    for (Index i = 0; i < all.size(); ++i) all[i] = rng.uniform();
    std::sort(all.data(), all.data() + all.size(), std::greater<double>());
    const auto [lhs, rhs, holds] = shifting_inequality_holds(
        all.head(r), all.segment(r, q), all.tail(r));
    if (!holds) {
      note = fmt("violation lhs=%.6f rhs=%.6f at trial %d", lhs, rhs, trial);
      return false;
    }
  }
  return true;
}

bool prop_monitored_solve(std::string& note) {
  const Frame frame = spikes_fourier_frame(16);
  const AnalysisOperators ops = make_analysis_operators(frame);
  SeededRng rng(780);
  const SensingModel model = gaussian_sensing(8, 16, rng);
  const SparseSignal sig = random_sparse_signal(frame, 2, rng);
  const Vec y = model.phi * sig.signal;
  SolverConfig cfg;
  cfg.n_inner = 5;
  const StepSystem system(model, ops, cfg);
  SolverState state = make_initial_state(16, 32, 8);
  for (int outer = 0; outer < 10; ++outer) {
    for (int sweep = 0; sweep < cfg.n_inner; ++sweep) {
      SolverState probe = state;
      probe.f = f_update(state, model, ops, y, system, cfg);
      const double res = step_one_residual(probe, model, ops, y, cfg);
      if (res > 1e-8) {
        note = fmt("signal-update residual %.2e", res);
        return false;
      }
      inner_sweep(state, model, ops, y, system, cfg);
      const double null_err =
          (frame.d * state.pg).norm() / (1.0 + state.pg.norm());
      if (null_err > 1e-8) {
        note = fmt("null-space drift %.2e", null_err);
        return false;
      }
    }
    state.c += model.phi * state.f - y;
  }
  return true;
}

bool prop_adapted_equals_plain(std::string& note) {
  SeededRng rng(781);
  const Frame id = make_frame(Mat::Identity(12, 12));
  for (int inst = 0; inst < 3; ++inst) {
    const Mat phi = gaussian_matrix(6, 12, 1.0 / std::sqrt(6.0), rng);
    for (Index s = 1; s <= 2; ++s) {
      const double a = drip_constant_bruteforce(phi, id, s);
      const double b = rip_constant_bruteforce(phi, s);
      if (std::abs(a - b) > 1e-12) {
        note = fmt("adapted %.6f vs plain %.6f at s=%lld", a, b,
                   static_cast<long long>(s));
        return false;
      }
    }
  }
  return true;
}

bool prop_iteration_equivalence(std::string& note) {
  SeededRng rng(782);
  const Mat phi = gaussian_matrix(4, 7, 1.0, rng);
  const Vec y = gaussian_matrix(4, 1, 1.0, rng).col(0);
  const Vec g = gaussian_matrix(7, 1, 1.0, rng).col(0);
  const double lambda = 1.3;
  const Mat system = Mat::Identity(7, 7) + lambda * (phi.adjoint() * phi);
  auto sub = [&](const Vec& b) {
    return spd_solve(system, Vec(g + lambda * (phi.adjoint() * (y - b))));
  };
  const auto simple = bregman_constrained(sub, phi, y, lambda, 12, 1e-30);
  Vec p = Vec::Zero(7);
  for (std::size_t k = 0; k < simple.size(); ++k) {
    const Vec u = spd_solve(system, Vec(g + p + lambda * (phi.adjoint() * y)));
    if ((simple[k] - u).norm() > 1e-10 * (1.0 + u.norm())) {
      note = fmt("iterate mismatch %.2e at step %zu",
                 (simple[k] - u).norm(), k);
      return false;
    }
    p -= lambda * (phi.adjoint() * (phi * u - y));
  }
  return true;
}

bool prop_minimal_coefficients(std::string& note) {
  SeededRng rng(783);
  for (int trial = 0; trial < 20; ++trial) {
    const Frame f = make_frame(gaussian_matrix(6, 16, 1.0, rng));
    const DualFrame dual = canonical_dual(f);
    const Vec sig = gaussian_matrix(6, 1, 1.0, rng).col(0);
    const Vec coeff = analysis_coefficients(dual, sig);
    const Vec oracle = least_squares(f.d, sig);
    const double err = (coeff - oracle).norm() / (1.0 + oracle.norm());
    if (err > 1e-10) {
      note = fmt("coefficient gap %.2e at trial %d", err, trial);
      return false;
    }
  }
  return true;
}

std::pair<bool, std::string> property_suites() {
  struct Suite {
    const char* name;
    bool (*fn)(std::string&);
  };
  const Suite suites[] = {
      {"dual identity", prop_dual_identity},
      {"shrink prox oracle", prop_shrink_prox},
      {"shifting fuzz", prop_shifting_fuzz},
      {"monitored solve", prop_monitored_solve},
      {"adapted vs plain isometry constant", prop_adapted_equals_plain},
      {"iteration form equivalence", prop_iteration_equivalence},
      {"minimal coefficients", prop_minimal_coefficients},
  };
  for (const Suite& s : suites) {
    std::string note;
    if (!s.fn(note))
      return {false, std::string(s.name) + " failed: " + note};
  }
  return {true, "all property suites passed"};
}

}  // namespace

int main() {
  run(1, "constant reproduction", constants_reproduction);
  run(2, "threshold reproduction", threshold_reproduction);
  run(3, "spikes+Fourier mode gap", spikes_fourier_gap);
  run(4, "Gabor recovery", gabor_recovery);
  run(5, "noise linearity", noise_linearity);
  run(6, "sparsity threshold", sparsity_threshold);
  run(7, "noise bound frequency", noise_bound_frequency);
  run(8, "property suites", property_suites);
  return g_failures == 0 ? 0 : 1;
}
