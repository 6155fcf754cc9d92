#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "odl1/experiments.hpp"
#include "odl1/serialize.hpp"

using namespace odl1;

namespace {

namespace fs = std::filesystem;

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "odl1_tests";
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.dictionary = DictionaryKind::SpikesFourier;
  cfg.n = 16;
  cfg.m = 8;
  cfg.sparsity = 2;
  cfg.solver.n_inner = 5;
  cfg.solver.n_outer = 30;
  cfg.solver.tol = 1e-8;
  cfg.trials = 2;
  cfg.base_seed = 11;
  return cfg;
}

}  // namespace

TEST_SUITE("xcli") {

TEST_CASE("config JSON round-trips through parse and dump") {
  const ExperimentConfig cfg = small_config();
  const std::string dumped = experiment_config_to_json(cfg);
  const ExperimentConfig back = parse_experiment_config(dumped);
  CHECK(experiment_config_to_json(back) == dumped);
  CHECK(back.n == cfg.n);
  CHECK(back.m == cfg.m);
  CHECK(back.sparsity == cfg.sparsity);
  CHECK(back.base_seed == cfg.base_seed);
  CHECK(back.solver.n_inner == cfg.solver.n_inner);
}

TEST_CASE("config parsing rejects malformed documents") {
  CHECK_THROWS_AS(parse_experiment_config("not json"), ConfigError);
  CHECK_THROWS_AS(
      parse_experiment_config(R"({"dictionary": {"kind": "wavelet"}})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_experiment_config(
          R"({"dictionary": {"kind": "gabor", "n": 16},
              "sensing": {"kind": "gaussian", "m": 64}})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_experiment_config(R"({"solver": {"mu": -1.0}})"), ConfigError);
}

TEST_CASE("per-trial seeds are the base seed plus the trial index") {
  ExperimentConfig cfg;
  cfg.base_seed = 1000;
  CHECK(cfg.trial_seed(0) == 1000);
  CHECK(cfg.trial_seed(7) == 1007);
}

TEST_CASE("convergence tables cover both modes on identical data") {
  const ConvergenceTable table = run_convergence(small_config());
  CHECK(!table.error_optimal_dual.empty());
  CHECK(table.error_optimal_dual.size() == table.error_canonical.size());
  CHECK(table.seed == 11);
}

TEST_CASE("convergence CSV output replays byte-identically") {
  const ConvergenceTable table = run_convergence(small_config());
  const fs::path a = temp_dir() / "conv_a.csv";
  const fs::path b = temp_dir() / "conv_b.csv";
  write_convergence_csv(table, a);
  write_convergence_csv(run_convergence(small_config()), b);
  const std::string text = read_file(a);
  CHECK(text == read_file(b));
  CHECK(text.rfind("iteration,error_optimal_dual,error_canonical,seed\n", 0)
        == 0);
}

TEST_CASE("a zero noise level in a sweep reproduces the noiseless trial") {
  const ExperimentConfig cfg = small_config();
  const SweepResult sweep =
      run_noise_sweep(cfg, {0.0}, {SolverMode::OptimalDual});
  REQUIRE(sweep.rows.size() == 1);

  const Frame frame = build_dictionary(cfg);
  const AnalysisOperators ops = make_analysis_operators(frame);
  double mean = 0.0;
  for (int t = 0; t < cfg.trials; ++t)
    mean += run_trial(cfg, ops, frame, t, SolverMode::OptimalDual)
                .relative_error;
  mean /= cfg.trials;
  CHECK(sweep.rows[0].mean_optimal_dual ==
        doctest::Approx(mean).epsilon(1e-12));
  CHECK(sweep.raw.size() == static_cast<std::size_t>(cfg.trials));
  for (const auto& row : sweep.raw) {
    CHECK(row.mode == "optimal-dual");
    CHECK(row.seed == cfg.base_seed + static_cast<std::uint64_t>(row.trial_index));
  }
}

TEST_CASE("sparsity sweeps reject points that round to an empty support") {
  CHECK_THROWS_AS(
      run_sparsity_sweep(small_config(), {0.01}, {SolverMode::OptimalDual}),
      ConfigError);
}

TEST_CASE("sweep CSV output replays byte-identically and carries seeds") {
  const ExperimentConfig cfg = small_config();
  const std::vector<double> rhos{0.25, 0.5};
  const std::vector<SolverMode> modes{SolverMode::OptimalDual,
                                      SolverMode::CanonicalAnalysis};
  const SweepResult s1 = run_sparsity_sweep(cfg, rhos, modes);
  const SweepResult s2 = run_sparsity_sweep(cfg, rhos, modes);
  const fs::path dir = temp_dir();
  write_sweep_csv(s1, dir / "sw_a.csv", dir / "sw_a_raw.csv");
  write_sweep_csv(s2, dir / "sw_b.csv", dir / "sw_b_raw.csv");
  CHECK(read_file(dir / "sw_a.csv") == read_file(dir / "sw_b.csv"));
  CHECK(read_file(dir / "sw_a_raw.csv") == read_file(dir / "sw_b_raw.csv"));
  const std::string summary = read_file(dir / "sw_a.csv");
  CHECK(summary.rfind("level,base_seed,mean_optimal_dual,std_optimal_dual,"
                      "mean_canonical,std_canonical\n", 0) == 0);
}

TEST_CASE("gnuplot scripts reference the CSV columns requested") {
  const fs::path dir = temp_dir();
  const fs::path script = dir / "plot.gp";
  write_gnuplot_script(dir / "table.csv", "demo", {3, 5}, script);
  const std::string text = read_file(script);
  CHECK(text.find("using 1:3") != std::string::npos);
  CHECK(text.find("using 1:5") != std::string::npos);
  CHECK(text.find("table.csv") != std::string::npos);
}

TEST_CASE("linear fit recovers an exact line") {
  const std::vector<double> x{0.0, 1.0, 2.0, 3.0};
  const std::vector<double> y{1.0, 3.0, 5.0, 7.0};
  const LinearFit fit = linear_fit(x, y);
  CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(linear_fit({1.0}, {1.0}), BadParams);
  CHECK_THROWS_AS(linear_fit({1.0, 1.0}, {1.0, 2.0}), BadParams);
}

TEST_CASE("theory front end reports constants and thresholds") {
  const std::string report = run_theory(R"({
    "which": "canonical",
    "s": 1, "a": 1, "b": 4,
    "kappa": 1.0, "B": 1.0,
    "c1": 0.725, "c2": 0.1,
    "delta_s_plus_a": 0.25, "delta_b": 0.25
  })");
  CHECK(report.find("\"condition_holds\": true") != std::string::npos);
  CHECK(report.find("\"C0\"") != std::string::npos);
  CHECK(report.find("9*delta_2s + 4*delta_4s < 5") != std::string::npos);

  CHECK_THROWS_AS(run_theory(R"({"which": "canonical",
    "s": 4, "a": 1, "b": 4, "kappa": 1.0,
    "delta_s_plus_a": 0.1, "delta_b": 0.1})"),
                  RhoTooLarge);
  CHECK_THROWS_AS(run_theory("{"), ConfigError);
}

TEST_CASE("frame serialization round-trips bit-exactly") {
  SeededRng rng(64);
  const Frame f = make_frame(gaussian_matrix_complex(5, 12, 1.0, rng));
  const fs::path path = temp_dir() / "frame.odl1";
  save_frame(f, path);
  const Frame back = load_frame(path);
  CHECK((back.d - f.d).norm() == 0.0);
  CHECK(back.lower == doctest::Approx(f.lower).epsilon(1e-12));
  CHECK(back.upper == doctest::Approx(f.upper).epsilon(1e-12));
}

TEST_CASE("sensing model serialization round-trips") {
  SeededRng rng(65);
  SensingModel model = partial_dft_signflip_sensing(4, 10, rng);
  set_noise_level(model, 0.25);
  const fs::path path = temp_dir() / "model.odl1";
  save_sensing_model(model, path);
  const SensingModel back = load_sensing_model(path);
  CHECK((back.phi - model.phi).norm() == 0.0);
  CHECK(back.kind == SensingKind::PartialDftSignFlipped);
  CHECK(back.sigma == model.sigma);
  CHECK(back.epsilon == model.epsilon);
}

TEST_CASE("serialization rejects foreign files") {
  const fs::path path = temp_dir() / "junk.odl1";
  {
    std::ofstream out(path, std::ios::binary);
    out << "JUNKJUNKJUNK";
  }
  CHECK_THROWS_AS(load_frame(path), Error);
}

TEST_CASE("recovery results serialize to JSON with histories") {
  RecoveryResult res;
  res.f_hat = Vec::Zero(2);
  res.f_hat[0] = Scalar(1.0, -2.0);
  res.d_hat = Vec::Zero(2);
  res.residual_history = {1.0, 0.5};
  res.error_history = std::vector<double>{0.9, 0.1};
  res.outer_iterations_used = 2;
  res.converged = true;
  const std::string doc = recovery_result_to_json(res);
  CHECK(doc.find("\"converged\": true") != std::string::npos);
  CHECK(doc.find("\"residual_history\"") != std::string::npos);
  CHECK(doc.find("\"error_history\"") != std::string::npos);
}

}  // TEST_SUITE
