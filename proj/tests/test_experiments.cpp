#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "spheresr/csv.hpp"
#include "spheresr/experiments.hpp"

using namespace spheresr;

namespace {

ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.L = 14;
  cfg.N = 6;
  cfg.r = 1;
  cfg.points_per_cell = 2;
  cfg.snr_db = 20.0;
  cfg.trials = 2;
  cfg.seed = 424242;
  cfg.threads = 2;
  return cfg;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("normalized error definition") {
  const auto grid = build_grid(50);
  DiracSignal f;
  f.grid = grid;
  f.support = {10, 20};
  f.amplitudes = Eigen::VectorXd::Constant(2, 3.0);

  CHECK(normalized_l1_error(to_gridded(f), f) == 0.0);

  DiracSignal empty;
  empty.grid = grid;
  empty.amplitudes = Eigen::VectorXd(0);
  GriddedFunction spike = GriddedFunction::zero(grid);
  spike.values[123] = 7.25;
  CHECK(normalized_l1_error(spike, empty) ==
        doctest::Approx(7.25 / 2500.0).epsilon(1e-15));

  GriddedFunction wrong{build_grid(10), Eigen::VectorXd::Zero(91)};
  CHECK_THROWS_AS(normalized_l1_error(wrong, f), DomainMismatchError);
}

TEST_CASE("config validation") {
  ExperimentConfig cfg = tiny_config();
  cfg.sigma = 0.1;  // both snr and sigma set
  CHECK_THROWS_AS(cfg.validate(), InvalidParameterError);
  cfg = tiny_config();
  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidParameterError);
  CHECK_THROWS_AS(parse_run_mode("nonsense"), InvalidParameterError);
  CHECK(parse_run_mode("l1min") == RunMode::l1min);
}

TEST_CASE("noiseless trials recover exactly and rerun identically") {
  ExperimentConfig cfg = tiny_config();
  cfg.L = 20;
  cfg.N = 5;
  cfg.points_per_cell = 3;
  cfg.snr_db = std::numeric_limits<double>::quiet_NaN();  // sigma = 0
  cfg.mode = RunMode::both;
  const ExperimentContext ctx = make_context(cfg);

  const auto records = run_trial(cfg, ctx, 0);
  REQUIRE(records.size() == 2);
  for (const auto& rec : records) {
    CHECK(rec.status == "converged");
    CHECK(rec.error <= 1e-4);
    CHECK(rec.delta == 0.0);
  }

  const auto again = run_trial(cfg, ctx, 0);
  for (std::size_t i = 0; i < records.size(); ++i)
    CHECK(trial_csv_row_deterministic(records[i]) ==
          trial_csv_row_deterministic(again[i]));

  const auto other = run_trial(cfg, ctx, 1);
  CHECK(other[0].seed != records[0].seed);
}

TEST_CASE("generation failures land in the record status") {
  ExperimentConfig cfg = tiny_config();
  cfg.points_per_cell = 500;  // packing bound is unreachable
  const ExperimentContext ctx = make_context(cfg);
  const auto records = run_trial(cfg, ctx, 0);
  REQUIRE(records.size() == 2);
  for (const auto& rec : records) {
    CHECK(rec.status.rfind("generation-failed", 0) == 0);
    CHECK(!std::isfinite(rec.error));
  }
}

TEST_CASE("noise sweep produces paired modes, summaries, and chart") {
  ExperimentConfig cfg = tiny_config();
  cfg.out_prefix = "sweep_test";
  const SweepResult result = sweep_noise(cfg, {15.0, 30.0}, true);
  REQUIRE(result.records.size() == 2 * 2 * 2);  // levels x trials x modes

  // Paired instances: same seed/delta within a (level, trial) pair.
  for (std::size_t i = 0; i < result.records.size(); i += 2) {
    CHECK(result.records[i].seed == result.records[i + 1].seed);
    CHECK(result.records[i].delta == result.records[i + 1].delta);
    CHECK(result.records[i].mode != result.records[i + 1].mode);
  }

  REQUIRE(result.summaries.size() == 4);
  write_trials_csv(result.records, "sweep_test_trials.csv");
  write_summary_csv(result.summaries, "sweep_test_summary.csv");
  write_loglog_svg(result.summaries, "sweep_test.svg");

  const std::string svg = slurp("sweep_test.svg");
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("l1min") != std::string::npos);
  CHECK(svg.find("feasibility") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);

  CHECK_THROWS_AS(sweep_noise(cfg, {10.0}, true), InvalidParameterError);

  std::remove("sweep_test_trials.csv");
  std::remove("sweep_test_summary.csv");
  std::remove("sweep_test.svg");
}

TEST_CASE("aggregates recompute exactly from the trial rows") {
  ExperimentConfig cfg = tiny_config();
  cfg.mode = RunMode::l1min;
  const SweepResult result = sweep_regularity(cfg, {1, 2});
  write_trials_csv(result.records, "agg_trials.csv");

  // Parse the CSV back and recompute the summary sums in row order.
  std::ifstream in("agg_trials.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == trial_csv_header());
  struct Acc {
    int n = 0;
    double sum = 0.0, maxv = 0.0;
  };
  std::map<std::pair<double, std::string>, Acc> acc;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::vector<std::string> fields;
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    REQUIRE(fields.size() == 15);
    const double level = std::stod(fields[0]);
    const std::string mode = fields[4];
    const double error = std::stod(fields[9]);
    Acc& a = acc[{level, mode}];
    a.n += 1;
    a.sum += error;
    a.maxv = std::max(a.maxv, error);
  }
  for (const auto& s : result.summaries) {
    const Acc& a = acc.at({s.level, s.mode});
    CHECK(a.n == s.n);
    CHECK(a.sum / a.n == s.mean_error);  // bitwise: same order, 17-digit round-trip
    CHECK(a.maxv == s.max_error);
  }
  std::remove("agg_trials.csv");
}

TEST_CASE("regularity sweep reruns byte-identically in the metric columns") {
  ExperimentConfig cfg = tiny_config();
  cfg.mode = RunMode::l1min;
  const SweepResult a = sweep_regularity(cfg, {1, 2});
  cfg.threads = 1;  // thread count must not matter
  const SweepResult b = sweep_regularity(cfg, {1, 2});
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i)
    CHECK(trial_csv_row_deterministic(a.records[i]) ==
          trial_csv_row_deterministic(b.records[i]));
}

TEST_CASE("reduced-scale recovery demo completes and verifies its witness") {
  ExperimentConfig cfg;
  cfg.L = 24;
  cfg.N = 6;
  cfg.r = 3;
  cfg.total_points = 9;
  cfg.snr_db = 30.0;
  cfg.seed = 5;
  cfg.max_iters = 1000000;  // the small grid iterates fast but settles late
  const DemoOutputs demo = run_recovery_demo(cfg);
  CHECK(demo.record.status == "converged");
  CHECK(demo.truth.size() == 9);
  CHECK(demo.record.M == 9);
  CHECK(cfg.srf() == doctest::Approx(4.0));
  // The demo's dense support satisfies the witness at the unscaled constant.
  CHECK(verify_rayleigh_witness(demo.truth.witness_points(),
                                {cfg.nu, 3, cfg.N, cfg.L}));
  CHECK(demo.s.values.size() == demo.recovery.values.size());
  CHECK(demo.record.error < 0.05);
}

TEST_CASE("coefficient and signal CSV round trips") {
  const auto grid = build_grid(12);
  DiracSignal sig;
  sig.grid = grid;
  sig.support = {3, 40, 77};
  sig.amplitudes = Eigen::VectorXd(3);
  sig.amplitudes << 1.25, 9.5, 0.03125;
  sig.witness = {{3}, {40, 77}};
  write_signal_csv(sig, "sig_rt.csv");
  const DiracSignal back = read_signal_csv("sig_rt.csv", grid);
  CHECK(back.support == sig.support);
  CHECK((back.amplitudes - sig.amplitudes).norm() == 0.0);
  REQUIRE(back.witness.size() == 2);
  CHECK(back.witness[1] == sig.witness[1]);
  std::remove("sig_rt.csv");

  const HarmonicCoeffs y = forward(sig, 7);
  write_coeffs_csv(y, "coeffs_rt.csv");
  const HarmonicCoeffs yy = read_coeffs_csv("coeffs_rt.csv");
  CHECK(yy.N == 7);
  CHECK((yy.values - y.values).norm() == 0.0);
  CHECK(yy.real_symmetric);
  std::remove("coeffs_rt.csv");

  GriddedFunction g = GriddedFunction::zero(grid);
  g.values[5] = -0.7519;
  write_gridded_csv(g, "grid_rt.csv");
  const GriddedFunction gg = read_gridded_csv("grid_rt.csv", grid);
  CHECK((gg.values - g.values).norm() == 0.0);
  std::remove("grid_rt.csv");
}
