#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "odl1/bregman.hpp"
#include "odl1/frames.hpp"
#include "odl1/ripanalysis.hpp"
#include "odl1/sensing.hpp"

namespace odl1 {

enum class DictionaryKind { Gabor, SpikesFourier };

// Experiment description; defaults reproduce the Gabor setup (m = 32,
// n = 128, d = 2560, s = 7, mu = lambda = 1, tol = 1e-6, n_outer = 200).
struct ExperimentConfig {
  DictionaryKind dictionary = DictionaryKind::Gabor;
  Index n = 128;
  Index oversampling = 20;
  double window_width = 24.0;  // 3n / 16
  SensingKind sensing = SensingKind::Gaussian;
  Index m = 32;
  Index sparsity = 7;
  double sigma = 0.0;
  SolverConfig solver;
  int trials = 5;
  std::uint64_t base_seed = 20120613;

  // Per-trial seed: base_seed + trial_index.
  std::uint64_t trial_seed(int trial) const {
    return base_seed + static_cast<std::uint64_t>(trial);
  }

  void validate() const;
};

// Parse from JSON text; unspecified fields keep their defaults.
// Throws ConfigError on unknown keys or malformed values.
ExperimentConfig parse_experiment_config(const std::string& json_text);
std::string experiment_config_to_json(const ExperimentConfig& config);

struct TrialRecord {
  int trial_index = 0;
  std::uint64_t seed = 0;
  double relative_error = 0.0;
  std::vector<double> residual_history;
  double wall_time = 0.0;  // seconds; never written to replayable outputs
};

// One fully seeded recovery: draw Phi, draw the sparse signal, measure,
// solve in the given mode. The frame is shared and immutable across trials.
TrialRecord run_trial(const ExperimentConfig& config,
                      const AnalysisOperators& ops, const Frame& frame,
                      int trial, SolverMode mode,
                      double relative_noise = -1.0,
                      std::vector<double>* error_history = nullptr);

struct ConvergenceTable {
  std::vector<double> error_optimal_dual;
  std::vector<double> error_canonical;  // padded to a common length
  std::uint64_t seed = 0;
};

// Both solver modes on identical (Phi, f, y); per-outer-iteration errors.
ConvergenceTable run_convergence(const ExperimentConfig& config);

struct SweepRow {
  double level = 0.0;  // noise level or relative sparsity
  std::uint64_t base_seed = 0;
  double mean_optimal_dual = 0.0, std_optimal_dual = 0.0;
  double mean_canonical = 0.0, std_canonical = 0.0;
};

struct SweepRawRow {
  double level = 0.0;
  int trial_index = 0;
  std::uint64_t seed = 0;
  std::string mode;
  double relative_error = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<SweepRawRow> raw;
  bool has_optimal_dual = false;
  bool has_canonical = false;
};

// Per level: sigma chosen so that sqrt(m) sigma / ||Phi f||_2 equals the
// requested relative noise level; `trials` seeded trials per mode.
SweepResult run_noise_sweep(const ExperimentConfig& config,
                            const std::vector<double>& noise_levels,
                            const std::vector<SolverMode>& modes);

// Per point: s = round(rho * m); rejects points with s < 1.
SweepResult run_sparsity_sweep(const ExperimentConfig& config,
                               const std::vector<double>& rho_values,
                               const std::vector<SolverMode>& modes);

// Theory front end: evaluates the guarantee for a JSON parameter document
// and returns the report plus reproduced thresholds as JSON text.
std::string run_theory(const std::string& params_json);

// Output helpers. All doubles are printed with "%.17g" so reruns are
// byte-identical.
std::string format_double(double v);
void write_convergence_csv(const ConvergenceTable& table,
                           const std::filesystem::path& path);
void write_sweep_csv(const SweepResult& result,
                     const std::filesystem::path& summary_path,
                     const std::filesystem::path& raw_path);
void write_gnuplot_script(const std::filesystem::path& csv_path,
                          const std::string& title,
                          const std::vector<int>& y_columns,
                          const std::filesystem::path& script_path);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LinearFit linear_fit(const std::vector<double>& x,
                     const std::vector<double>& y);

Frame build_dictionary(const ExperimentConfig& config);

}  // namespace odl1
