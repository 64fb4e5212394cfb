#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "spheresr/operators.hpp"
#include "spheresr/signal.hpp"
#include "spheresr/signal_gen.hpp"
#include "spheresr/solver.hpp"

namespace spheresr {

// Experiment harness: instance generation -> measurement -> solve -> metrics,
// with sweeps over noise level and Rayleigh regularity.  Every trial derives
// its RNG streams from (master seed, level index, trial index), so sweeps are
// reproducible byte-for-byte in all columns except runtimes, and trials may
// run on any number of threads without changing the output.

enum class RunMode { feasibility, l1min, both };

RunMode parse_run_mode(const std::string& name);
const char* to_string(RunMode mode);

/// Per-cell separation constant used when generating supports.
/// theorem_class separates every cell by nu * r / N, the class the error
/// bound is stated for; its cells thin out fast as r grows (pairwise
/// 5*pi*r/(2N) caps a cell at a handful of points).  fixed_nu separates
/// cells by nu / N regardless of r, which admits the dense many-spike
/// supports the reported experiments use.
enum class MuScaling { theorem_class, fixed_nu };

MuScaling parse_mu_scaling(const std::string& name);
const char* to_string(MuScaling scaling);

struct ExperimentConfig {
  int L = 50;
  int N = 12;
  int r = 1;
  double nu = 7.853981633974483096156608458198757;  // 5*pi/2
  MuScaling mu_scaling = MuScaling::fixed_nu;
  int points_per_cell = 10;
  int total_points = 0;  // > 0: round-robin this many points across cells
  double snr_db = std::numeric_limits<double>::quiet_NaN();
  double sigma = std::numeric_limits<double>::quiet_NaN();
  double delta_override = std::numeric_limits<double>::quiet_NaN();
  int trials = 10;
  std::uint64_t seed = 1;
  RunMode mode = RunMode::both;
  // Solver knobs, forwarded into SolveConfig.
  long max_iters = 200000;
  long min_iters = 1000;
  double feas_tol = 1e-6;
  double obj_tol = 1e-8;
  long obj_window = 100;
  double step_ratio = 1.0;
  int threads = 0;  // 0 = hardware concurrency
  std::string out_prefix;

  double srf() const { return static_cast<double>(L) / N; }
  void validate() const;
};

/// One solved instance in one mode.  runtime_seconds is the only column that
/// varies between reruns of the same seed.
struct TrialRecord {
  double level = 0.0;  // sweep coordinate: sigma/snr for noise sweeps, r for r-sweeps
  int r = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  std::string mode;
  int M = 0;
  double sigma = 0.0;
  double snr_realized = std::numeric_limits<double>::infinity();
  double delta = 0.0;
  double error = std::numeric_limits<double>::quiet_NaN();
  double residual_l1 = std::numeric_limits<double>::quiet_NaN();
  double objective = std::numeric_limits<double>::quiet_NaN();
  std::string status;
  long iterations = 0;
  double runtime_seconds = 0.0;
};

struct LevelSummary {
  double level = 0.0;
  std::string mode;
  int n = 0;
  double mean_error = 0.0;
  double max_error = 0.0;
  double mean_delta = 0.0;
  double mean_sigma = 0.0;
};

struct SweepResult {
  std::vector<TrialRecord> records;
  std::vector<LevelSummary> summaries;
};

/// Normalized l1 error (1/L^2) * sum over stored grid points of |fhat - f|;
/// the collapsed pole contributes one term.
double normalized_l1_error(const GriddedFunction& fhat, const DiracSignal& f);

/// Grid + operator shared by all trials of a sweep.
struct ExperimentContext {
  std::shared_ptr<const SphereGrid> grid;
  std::shared_ptr<const MeasurementMatrix> op;
  double op_norm = 0.0;
};

ExperimentContext make_context(const ExperimentConfig& config);

/// Runs generate -> forward -> add_noise -> solve -> metrics for one trial.
/// Returns one record per requested mode; generation and solver errors are
/// reported in the status field instead of thrown.
std::vector<TrialRecord> run_trial(const ExperimentConfig& config,
                                   const ExperimentContext& ctx,
                                   int trial_index, int level_index = 0,
                                   double level_value = 0.0);
std::vector<TrialRecord> run_trial(const ExperimentConfig& config,
                                   int trial_index);

/// Noise sweep: for each level, `trials` paired runs in the requested
/// mode(s).  Levels are SNR values in dB when levels_are_snr_db, otherwise
/// raw sigmas.  Needs at least two levels.
SweepResult sweep_noise(const ExperimentConfig& config,
                        const std::vector<double>& levels,
                        bool levels_are_snr_db);

/// Regularity sweep: mean and max error per r value.
SweepResult sweep_regularity(const ExperimentConfig& config,
                             const std::vector<int>& r_values);

/// Aggregates per (level, mode) in order of first appearance; means are
/// accumulated in row order so they reproduce exactly.
std::vector<LevelSummary> summarize(const std::vector<TrialRecord>& records);

std::string trial_csv_header();
std::string trial_csv_row(const TrialRecord& rec);
/// The row without its runtime column; byte-identical across reruns.
std::string trial_csv_row_deterministic(const TrialRecord& rec);

void write_trials_csv(const std::vector<TrialRecord>& records,
                      const std::string& path);
void write_summary_csv(const std::vector<LevelSummary>& summaries,
                       const std::string& path);

/// Minimal log-log line chart of mean error vs mean realized delta, one
/// polyline per mode.
void write_loglog_svg(const std::vector<LevelSummary>& summaries,
                      const std::string& path);

/// End-to-end recovery showcase: r cells, total_points points at per-cell
/// separation nu / N (unscaled by r, which admits dense supports the
/// nu * r class cannot hold), noisy measurement, l1min recovery.
struct DemoOutputs {
  DiracSignal truth;
  GriddedFunction s;
  GriddedFunction recovery;
  TrialRecord record;
};

DemoOutputs run_recovery_demo(const ExperimentConfig& config);

}  // namespace spheresr
