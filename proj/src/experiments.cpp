#include "odl1/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <thread>

#include <json.hpp>

namespace odl1 {

namespace {

using nlohmann::json;

const char* mode_name(SolverMode mode) {
  return mode == SolverMode::OptimalDual ? "optimal-dual" : "canonical";
}

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

// Runs fn(i) for i in [0, count) on a small pool; results land by index so
// scheduling never changes output bytes.
template <typename Fn>
void parallel_for(int count, Fn&& fn) {
  const unsigned workers =
      std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                         static_cast<unsigned>(count));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

double mean_of(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double s = 0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

SweepResult run_sweep(const ExperimentConfig& config,
                      const std::vector<double>& levels,
                      const std::vector<SolverMode>& modes, bool noise_sweep) {
  ExperimentConfig base = config;
  base.validate();
  if (modes.empty()) throw ConfigError("sweep: no solver modes requested");

  const Frame frame = build_dictionary(base);
  const AnalysisOperators ops = make_analysis_operators(frame);

  SweepResult result;
  for (SolverMode mode : modes) {
    if (mode == SolverMode::OptimalDual) result.has_optimal_dual = true;
    if (mode == SolverMode::CanonicalAnalysis) result.has_canonical = true;
  }

  for (double level : levels) {
    ExperimentConfig point = base;
    if (noise_sweep) {
      if (level < 0) throw ConfigError("noise sweep: levels must be >= 0");
    } else {
      point.sparsity =
          static_cast<Index>(std::llround(level * static_cast<double>(base.m)));
      if (point.sparsity < 1)
        throw ConfigError("sparsity sweep: rho * m rounds below 1");
      if (point.sparsity > frame.atoms())
        throw ConfigError("sparsity sweep: rho * m exceeds dictionary size");
    }

    SweepRow row;
    row.level = level;
    row.base_seed = point.trial_seed(0);

    for (SolverMode mode : modes) {
      std::vector<double> errors(static_cast<std::size_t>(point.trials));
      std::vector<TrialRecord> records(static_cast<std::size_t>(point.trials));
      parallel_for(point.trials, [&](int t) {
        records[static_cast<std::size_t>(t)] =
            run_trial(point, ops, frame, t, mode,
                      noise_sweep ? level : -1.0);
        errors[static_cast<std::size_t>(t)] =
            records[static_cast<std::size_t>(t)].relative_error;
      });
      const double mean = mean_of(errors);
      const double sd = std_of(errors, mean);
      if (mode == SolverMode::OptimalDual) {
        row.mean_optimal_dual = mean;
        row.std_optimal_dual = sd;
      } else {
        row.mean_canonical = mean;
        row.std_canonical = sd;
      }
      for (const auto& rec : records) {
        result.raw.push_back({level, rec.trial_index, rec.seed,
                              mode_name(mode), rec.relative_error});
      }
    }
    result.rows.push_back(row);
  }
  return result;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n < 2) throw ConfigError("config: n must be >= 2");
  if (dictionary == DictionaryKind::Gabor) {
    if (n % 2 != 0) throw ConfigError("config: gabor requires even n");
    if (oversampling < 1) throw ConfigError("config: oversampling >= 1");
    if (window_width <= 0) throw ConfigError("config: window_width > 0");
  }
  if (m < 1 || m > n) throw ConfigError("config: need 1 <= m <= n");
  const Index atoms =
      dictionary == DictionaryKind::Gabor ? oversampling * n : 2 * n;
  if (sparsity < 0 || sparsity > atoms)
    throw ConfigError("config: sparsity out of range");
  if (sigma < 0) throw ConfigError("config: sigma must be >= 0");
  if (trials < 1) throw ConfigError("config: trials must be >= 1");
  try {
    solver.validate();
  } catch (const BadParams& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    if (j.contains("dictionary")) {
      const json& d = j.at("dictionary");
      if (d.contains("kind")) {
        const std::string kind = d.at("kind").get<std::string>();
        if (kind == "gabor")
          cfg.dictionary = DictionaryKind::Gabor;
        else if (kind == "spikes_fourier")
          cfg.dictionary = DictionaryKind::SpikesFourier;
        else
          throw ConfigError("config: unknown dictionary kind '" + kind + "'");
      }
      read_field(d, "n", cfg.n);
      read_field(d, "oversampling", cfg.oversampling);
      if (d.contains("window_width"))
        cfg.window_width = d.at("window_width").get<double>();
      else
        cfg.window_width = 3.0 * static_cast<double>(cfg.n) / 16.0;
    }
    if (j.contains("sensing")) {
      const json& s = j.at("sensing");
      if (s.contains("kind")) {
        const std::string kind = s.at("kind").get<std::string>();
        if (kind == "gaussian")
          cfg.sensing = SensingKind::Gaussian;
        else if (kind == "partial_dft_signflip")
          cfg.sensing = SensingKind::PartialDftSignFlipped;
        else
          throw ConfigError("config: unknown sensing kind '" + kind + "'");
      }
      read_field(s, "m", cfg.m);
    }
    read_field(j, "sparsity", cfg.sparsity);
    read_field(j, "sigma", cfg.sigma);
    if (j.contains("solver")) {
      const json& s = j.at("solver");
      read_field(s, "mu", cfg.solver.mu);
      read_field(s, "lambda", cfg.solver.lambda);
      read_field(s, "n_inner", cfg.solver.n_inner);
      read_field(s, "n_outer", cfg.solver.n_outer);
      read_field(s, "tol", cfg.solver.tol);
      if (s.contains("mode")) {
        const std::string mode = s.at("mode").get<std::string>();
        if (mode == "optimal-dual")
          cfg.solver.mode = SolverMode::OptimalDual;
        else if (mode == "canonical")
          cfg.solver.mode = SolverMode::CanonicalAnalysis;
        else
          throw ConfigError("config: unknown solver mode '" + mode + "'");
      }
      if (s.contains("use_cg") && s.at("use_cg").get<bool>())
        cfg.solver.linear_solver = LinearSolverKind::ConjugateGradient;
    }
    read_field(j, "trials", cfg.trials);
    read_field(j, "base_seed", cfg.base_seed);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::string experiment_config_to_json(const ExperimentConfig& config) {
  json d;
  if (config.dictionary == DictionaryKind::Gabor) {
    d = {{"kind", "gabor"},
         {"n", config.n},
         {"oversampling", config.oversampling},
         {"window_width", config.window_width}};
  } else {
    d = {{"kind", "spikes_fourier"}, {"n", config.n}};
  }
  json doc = {
      {"dictionary", d},
      {"sensing",
       {{"kind", config.sensing == SensingKind::Gaussian
                     ? "gaussian"
                     : "partial_dft_signflip"},
        {"m", config.m}}},
      {"sparsity", config.sparsity},
      {"sigma", config.sigma},
      {"solver",
       {{"mu", config.solver.mu},
        {"lambda", config.solver.lambda},
        {"n_inner", config.solver.n_inner},
        {"n_outer", config.solver.n_outer},
        {"tol", config.solver.tol},
        {"mode", config.solver.mode == SolverMode::OptimalDual
                     ? "optimal-dual"
                     : "canonical"},
        {"use_cg",
         config.solver.linear_solver == LinearSolverKind::ConjugateGradient}}},
      {"trials", config.trials},
      {"base_seed", config.base_seed}};
  return doc.dump(2);
}

Frame build_dictionary(const ExperimentConfig& config) {
  return config.dictionary == DictionaryKind::Gabor
             ? gabor_frame(config.n, config.oversampling, config.window_width)
             : spikes_fourier_frame(config.n);
}

TrialRecord run_trial(const ExperimentConfig& config,
                      const AnalysisOperators& ops, const Frame& frame,
                      int trial, SolverMode mode, double relative_noise,
                      std::vector<double>* error_history) {
  const auto start = std::chrono::steady_clock::now();
  TrialRecord record;
  record.trial_index = trial;
  record.seed = config.trial_seed(trial);

  // Fixed draw order per trial: sensing matrix, sparse signal, noise.
  SeededRng rng(record.seed);
  SensingModel model =
      config.sensing == SensingKind::Gaussian
          ? gaussian_sensing(config.m, config.n, rng)
          : partial_dft_signflip_sensing(config.m, config.n, rng);
  const SparseSignal signal = random_sparse_signal(frame, config.sparsity, rng);

  double sigma = config.sigma;
  if (relative_noise >= 0.0) {
    sigma = relative_noise * (model.phi * signal.signal).norm() /
            std::sqrt(static_cast<double>(config.m));
  }
  set_noise_level(model, sigma);
  const Measurement meas = measure(model, signal.signal, rng);

  SolverConfig solver_config = config.solver;
  solver_config.mode = mode;
  const RecoveryResult result =
      solve(model, meas.y, ops, solver_config, &signal.signal);

  const double truth_norm = signal.signal.norm();
  record.relative_error =
      truth_norm > 0 ? (result.f_hat - signal.signal).norm() / truth_norm
                     : result.f_hat.norm();
  record.residual_history = result.residual_history;
  if (error_history) *error_history = *result.error_history;
  record.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return record;
}

ConvergenceTable run_convergence(const ExperimentConfig& config) {
  ExperimentConfig cfg = config;
  cfg.validate();
  const Frame frame = build_dictionary(cfg);
  const AnalysisOperators ops = make_analysis_operators(frame);

  ConvergenceTable table;
  table.seed = cfg.trial_seed(0);
  run_trial(cfg, ops, frame, 0, SolverMode::OptimalDual, -1.0,
            &table.error_optimal_dual);
  run_trial(cfg, ops, frame, 0, SolverMode::CanonicalAnalysis, -1.0,
            &table.error_canonical);

  const std::size_t len =
      std::max(table.error_optimal_dual.size(), table.error_canonical.size());
  auto pad = [len](std::vector<double>& v) {
    if (!v.empty()) v.resize(len, v.back());
  };
  pad(table.error_optimal_dual);
  pad(table.error_canonical);
  return table;
}

SweepResult run_noise_sweep(const ExperimentConfig& config,
                            const std::vector<double>& noise_levels,
                            const std::vector<SolverMode>& modes) {
  return run_sweep(config, noise_levels, modes, true);
}

SweepResult run_sparsity_sweep(const ExperimentConfig& config,
                               const std::vector<double>& rho_values,
                               const std::vector<SolverMode>& modes) {
  return run_sweep(config, rho_values, modes, false);
}

std::string run_theory(const std::string& params_json) {
  json j;
  try {
    j = json::parse(params_json);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("theory: invalid JSON: ") + e.what());
  }
  GuaranteeParams p;
  std::string which = "canonical";
  try {
    read_field(j, "which", which);
    read_field(j, "s", p.s);
    read_field(j, "a", p.a);
    read_field(j, "b", p.b);
    p.rho = static_cast<double>(p.s) / static_cast<double>(p.b);
    read_field(j, "rho", p.rho);
    read_field(j, "kappa", p.kappa);
    read_field(j, "B", p.b_upper);
    read_field(j, "BBtilde", p.bb_tilde);
    read_field(j, "c1", p.c1);
    read_field(j, "c2", p.c2);
    read_field(j, "delta_s_plus_a", p.delta_s_plus_a);
    read_field(j, "delta_b", p.delta_b);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("theory: ") + e.what());
  }

  const GuaranteeReport report = which == "general"
                                     ? sufficient_condition_general(p)
                                     : sufficient_condition_canonical(p);
  json out = {{"which", which},
              {"condition_holds", report.condition_holds},
              {"K1", report.k1},
              {"K2", report.k2}};
  if (report.condition_holds) {
    out["C0"] = report.c0;
    out["C1"] = report.c1;
  }
  out["delta_threshold_equal_deltas"] =
      general_delta_threshold(p.rho, p.bb_tilde);
  const auto reduction = canonical_parseval_reduction(1, 4);
  out["parseval_reduction"] = {
      {"inequality", std::to_string(reduction.coeff_s_plus_a) + "*delta_2s + " +
                         std::to_string(reduction.coeff_b) + "*delta_4s < " +
                         std::to_string(reduction.rhs)},
      {"coeff_s_plus_a", reduction.coeff_s_plus_a},
      {"coeff_b", reduction.coeff_b},
      {"rhs", reduction.rhs}};
  out["delta_2s_threshold_a3s_b12s"] =
      general_delta_threshold_substituted(1.0 / 12.0, 1.0, 4.0, 12.0);
  return out.dump(2);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_convergence_csv(const ConvergenceTable& table,
                           const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string());
  out << "iteration,error_optimal_dual,error_canonical,seed\n";
  for (std::size_t k = 0; k < table.error_optimal_dual.size(); ++k) {
    out << (k + 1) << ',' << format_double(table.error_optimal_dual[k]) << ','
        << format_double(table.error_canonical[k]) << ',' << table.seed
        << '\n';
  }
}

void write_sweep_csv(const SweepResult& result,
                     const std::filesystem::path& summary_path,
                     const std::filesystem::path& raw_path) {
  {
    std::ofstream out(summary_path);
    if (!out) throw Error("cannot open " + summary_path.string());
    out << "level,base_seed";
    if (result.has_optimal_dual) out << ",mean_optimal_dual,std_optimal_dual";
    if (result.has_canonical) out << ",mean_canonical,std_canonical";
    out << '\n';
    for (const auto& row : result.rows) {
      out << format_double(row.level) << ',' << row.base_seed;
      if (result.has_optimal_dual)
        out << ',' << format_double(row.mean_optimal_dual) << ','
            << format_double(row.std_optimal_dual);
      if (result.has_canonical)
        out << ',' << format_double(row.mean_canonical) << ','
            << format_double(row.std_canonical);
      out << '\n';
    }
  }
  {
    std::ofstream out(raw_path);
    if (!out) throw Error("cannot open " + raw_path.string());
    out << "level,trial_index,seed,mode,relative_error\n";
    for (const auto& row : result.raw) {
      out << format_double(row.level) << ',' << row.trial_index << ','
          << row.seed << ',' << row.mode << ','
          << format_double(row.relative_error) << '\n';
    }
  }
}

void write_gnuplot_script(const std::filesystem::path& csv_path,
                          const std::string& title,
                          const std::vector<int>& y_columns,
                          const std::filesystem::path& script_path) {
  std::ofstream out(script_path);
  if (!out) throw Error("cannot open " + script_path.string());
  out << "set datafile separator ','\n"
      << "set key autotitle columnhead\n"
      << "set logscale y\n"
      << "set title '" << title << "'\n"
      << "plot ";
  bool first = true;
  for (int c : y_columns) {
    if (!first) out << ", ";
    first = false;
    out << "'" << csv_path.filename().string() << "' using 1:" << c
        << " with linespoints";
  }
  out << '\n';
}

LinearFit linear_fit(const std::vector<double>& x,
                     const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw BadParams("linear_fit: need matching vectors of length >= 2");
  const double n = static_cast<double>(x.size());
  const double mx = mean_of(x), my = mean_of(y);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  (void)n;
  if (sxx == 0) throw BadParams("linear_fit: degenerate abscissae");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

}  // namespace odl1
