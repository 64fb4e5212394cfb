#include "spheresr/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "spheresr/csv.hpp"
#include "spheresr/rng.hpp"

namespace spheresr {

RunMode parse_run_mode(const std::string& name) {
  if (name == "feasibility") return RunMode::feasibility;
  if (name == "l1min") return RunMode::l1min;
  if (name == "both") return RunMode::both;
  throw InvalidParameterError("unknown mode '" + name +
                              "' (expected feasibility, l1min, or both)");
}

const char* to_string(RunMode mode) {
  switch (mode) {
    case RunMode::feasibility: return "feasibility";
    case RunMode::l1min: return "l1min";
    case RunMode::both: return "both";
  }
  return "unknown";
}

MuScaling parse_mu_scaling(const std::string& name) {
  if (name == "theorem") return MuScaling::theorem_class;
  if (name == "fixed") return MuScaling::fixed_nu;
  throw InvalidParameterError("unknown mu scaling '" + name +
                              "' (expected theorem or fixed)");
}

const char* to_string(MuScaling scaling) {
  return scaling == MuScaling::theorem_class ? "theorem" : "fixed";
}

void ExperimentConfig::validate() const {
  if (L < 2) throw InvalidParameterError("config: L must be >= 2");
  if (N < 1) throw InvalidParameterError("config: N must be >= 1");
  if (r < 1) throw InvalidParameterError("config: r must be >= 1");
  if (!(nu > 0.0)) throw InvalidParameterError("config: nu must be > 0");
  if (trials < 1) throw InvalidParameterError("config: trials must be >= 1");
  if (points_per_cell < 1 && total_points < 1)
    throw InvalidParameterError("config: need points_per_cell >= 1 or total_points >= 1");
  if (std::isfinite(snr_db) && std::isfinite(sigma))
    throw InvalidParameterError("config: give at most one of snr_db and sigma");
}

double normalized_l1_error(const GriddedFunction& fhat, const DiracSignal& f) {
  if (!fhat.grid || !f.grid || fhat.grid->L() != f.grid->L())
    throw DomainMismatchError("normalized_l1_error: grid mismatch");
  const GriddedFunction truth = to_gridded(f);
  if (truth.values.size() != fhat.values.size())
    throw DomainMismatchError("normalized_l1_error: length mismatch");
  const double L = f.grid->L();
  return (fhat.values - truth.values).lpNorm<1>() / (L * L);
}

ExperimentContext make_context(const ExperimentConfig& config) {
  config.validate();
  ExperimentContext ctx;
  ctx.grid = build_grid(config.L);
  ctx.op = projection_kernel(ctx.grid, config.N);
  ctx.op_norm = operator_norm(ctx.op->kernel());
  return ctx;
}

namespace {

SolveConfig solver_config(const ExperimentConfig& config, double delta) {
  SolveConfig sc;
  sc.delta = delta;
  sc.feas_tol = config.feas_tol;
  sc.obj_tol = config.obj_tol;
  sc.obj_window = config.obj_window;
  sc.max_iters = config.max_iters;
  sc.min_iters = config.min_iters;
  sc.step_ratio = config.step_ratio;
  return sc;
}

std::vector<SolveMode> modes_of(RunMode mode) {
  switch (mode) {
    case RunMode::feasibility: return {SolveMode::feasibility};
    case RunMode::l1min: return {SolveMode::l1min};
    case RunMode::both: return {SolveMode::l1min, SolveMode::feasibility};
  }
  return {};
}

int thread_count(const ExperimentConfig& config) {
  if (config.threads > 0) return config.threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

DiracSignal generate_support(const ExperimentConfig& config,
                             const std::shared_ptr<const SphereGrid>& grid,
                             std::uint64_t seed) {
  const double mu = config.mu_scaling == MuScaling::theorem_class
                        ? config.nu * config.r
                        : config.nu;
  std::vector<int> sizes;
  if (config.total_points > 0) {
    sizes.assign(config.r, config.total_points / config.r);
    for (int i = 0; i < config.total_points % config.r; ++i) ++sizes[i];
  } else {
    sizes.assign(config.r, config.points_per_cell);
  }
  return gen_support_cells(mu, config.N, grid, sizes, seed);
}

}  // namespace

std::vector<TrialRecord> run_trial(const ExperimentConfig& config,
                                   const ExperimentContext& ctx,
                                   int trial_index, int level_index,
                                   double level_value) {
  config.validate();
  if (!ctx.grid || ctx.grid->L() != config.L || !ctx.op ||
      ctx.op->N() != config.N)
    throw DomainMismatchError("run_trial: context does not match the config");
  const std::uint64_t trial_seed =
      derive_seed(config.seed, static_cast<std::uint64_t>(level_index),
                  static_cast<std::uint64_t>(trial_index));

  TrialRecord base;
  base.level = level_value;
  base.r = config.r;
  base.trial = trial_index;
  base.seed = trial_seed;

  std::vector<TrialRecord> records;
  const auto modes = modes_of(config.mode);

  DiracSignal signal;
  Measurement meas;
  double delta = 0.0;
  try {
    signal = generate_support(config, ctx.grid, derive_seed(trial_seed, 1));
    signal.amplitudes = gen_amplitudes(signal.size(), derive_seed(trial_seed, 2));
    base.M = signal.size();

    const HarmonicCoeffs clean = forward(signal, config.N);
    double sigma = 0.0;
    if (std::isfinite(config.sigma))
      sigma = config.sigma;
    else if (std::isfinite(config.snr_db))
      sigma = calibrate_sigma(clean, config.snr_db);
    meas = add_noise(clean, sigma, derive_seed(trial_seed, 3), ctx.grid);
    base.sigma = sigma;
    base.snr_realized = meas.snr_db;
    delta = std::isfinite(config.delta_override) ? config.delta_override
                                                 : meas.delta;
    base.delta = delta;
  } catch (const std::exception& e) {
    base.status = std::string("generation-failed: ") + e.what();
    for (const auto mode : modes) {
      TrialRecord rec = base;
      rec.mode = to_string(mode);
      records.push_back(std::move(rec));
    }
    return records;
  }

  for (const auto mode : modes) {
    TrialRecord rec = base;
    rec.mode = to_string(mode);
    try {
      SolveConfig sc = solver_config(config, delta);
      sc.op_norm_hint = ctx.op_norm;
      const SolveResult result = mode == SolveMode::l1min
                                     ? solve_l1min(meas.s, *ctx.op, sc)
                                     : solve_feasibility(meas.s, *ctx.op, sc);
      rec.error = normalized_l1_error(result.g, signal);
      rec.residual_l1 = result.residual_l1;
      rec.objective = result.objective;
      rec.status = to_string(result.status);
      rec.iterations = result.iterations;
      rec.runtime_seconds = result.runtime_seconds;
    } catch (const std::exception& e) {
      rec.status = std::string("solver-failed: ") + e.what();
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<TrialRecord> run_trial(const ExperimentConfig& config,
                                   int trial_index) {
  return run_trial(config, make_context(config), trial_index);
}

namespace {

/// Runs trials x levels on a worker pool; records land in deterministic
/// (level, trial, mode) order no matter how many threads execute.
SweepResult run_sweep(const ExperimentConfig& config,
                      const std::vector<ExperimentConfig>& level_configs,
                      const std::vector<double>& level_values) {
  const ExperimentContext ctx = make_context(level_configs.front());
  const int modes = static_cast<int>(modes_of(config.mode).size());
  const int trials = config.trials;
  const int jobs = static_cast<int>(level_configs.size()) * trials;

  std::vector<TrialRecord> records(static_cast<std::size_t>(jobs) * modes);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int job = next.fetch_add(1);
      if (job >= jobs) return;
      const int level = job / trials;
      const int trial = job % trials;
      std::vector<TrialRecord> recs =
          run_trial(level_configs[level], ctx, trial, level, level_values[level]);
      for (int m = 0; m < modes && m < static_cast<int>(recs.size()); ++m)
        records[static_cast<std::size_t>(job) * modes + m] = std::move(recs[m]);
    }
  };

  const int workers = std::min(thread_count(config), jobs);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int i = 1; i < workers; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  SweepResult result;
  result.records = std::move(records);
  result.summaries = summarize(result.records);
  return result;
}

}  // namespace

SweepResult sweep_noise(const ExperimentConfig& config,
                        const std::vector<double>& levels,
                        bool levels_are_snr_db) {
  if (levels.size() < 2)
    throw InvalidParameterError("sweep_noise: need at least two noise levels");
  std::vector<ExperimentConfig> level_configs;
  for (const double level : levels) {
    ExperimentConfig c = config;
    c.snr_db = std::numeric_limits<double>::quiet_NaN();
    c.sigma = std::numeric_limits<double>::quiet_NaN();
    if (levels_are_snr_db)
      c.snr_db = level;
    else
      c.sigma = level;
    level_configs.push_back(c);
  }
  return run_sweep(config, level_configs, levels);
}

SweepResult sweep_regularity(const ExperimentConfig& config,
                             const std::vector<int>& r_values) {
  if (r_values.empty())
    throw InvalidParameterError("sweep_regularity: need at least one r");
  for (int r : r_values)
    if (r < 1) throw InvalidParameterError("sweep_regularity: r values must be >= 1");
  std::vector<ExperimentConfig> level_configs;
  std::vector<double> level_values;
  for (const int r : r_values) {
    ExperimentConfig c = config;
    c.r = r;
    level_configs.push_back(c);
    level_values.push_back(static_cast<double>(r));
  }
  return run_sweep(config, level_configs, level_values);
}

std::vector<LevelSummary> summarize(const std::vector<TrialRecord>& records) {
  std::vector<LevelSummary> out;
  auto find = [&](double level, const std::string& mode) -> LevelSummary& {
    for (auto& s : out)
      if (s.level == level && s.mode == mode) return s;
    out.push_back({level, mode, 0, 0.0, 0.0, 0.0, 0.0});
    return out.back();
  };
  // Sums in row order; reruns reproduce the same bytes.
  for (const auto& rec : records) {
    if (!std::isfinite(rec.error)) continue;  // failed trials carry no metric
    LevelSummary& s = find(rec.level, rec.mode);
    s.n += 1;
    s.mean_error += rec.error;
    s.max_error = std::max(s.max_error, rec.error);
    s.mean_delta += rec.delta;
    s.mean_sigma += rec.sigma;
  }
  for (auto& s : out) {
    if (s.n == 0) continue;
    s.mean_error /= s.n;
    s.mean_delta /= s.n;
    s.mean_sigma /= s.n;
  }
  return out;
}

std::string trial_csv_header() {
  return "level,r,trial,seed,mode,M,sigma,snr_db,delta,error,residual_l1,"
         "objective,status,iterations,runtime_seconds";
}

std::string trial_csv_row_deterministic(const TrialRecord& rec) {
  std::string status = rec.status;  // error texts may carry commas
  std::replace(status.begin(), status.end(), ',', ';');
  std::ostringstream out;
  out << format_g17(rec.level) << ',' << rec.r << ',' << rec.trial << ','
      << rec.seed << ',' << rec.mode << ',' << rec.M << ','
      << format_g17(rec.sigma) << ',' << format_g17(rec.snr_realized) << ','
      << format_g17(rec.delta) << ',' << format_g17(rec.error) << ','
      << format_g17(rec.residual_l1) << ',' << format_g17(rec.objective) << ','
      << status << ',' << rec.iterations;
  return out.str();
}

std::string trial_csv_row(const TrialRecord& rec) {
  return trial_csv_row_deterministic(rec) + ',' +
         format_g17(rec.runtime_seconds);
}

void write_trials_csv(const std::vector<TrialRecord>& records,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  out << trial_csv_header() << '\n';
  for (const auto& rec : records) out << trial_csv_row(rec) << '\n';
}

void write_summary_csv(const std::vector<LevelSummary>& summaries,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  out << "level,mode,n,mean_error,max_error,mean_delta,mean_sigma\n";
  for (const auto& s : summaries)
    out << format_g17(s.level) << ',' << s.mode << ',' << s.n << ','
        << format_g17(s.mean_error) << ',' << format_g17(s.max_error) << ','
        << format_g17(s.mean_delta) << ',' << format_g17(s.mean_sigma) << '\n';
}

namespace {

double log_safe(double v) { return std::log10(std::max(v, 1e-300)); }

}  // namespace

void write_loglog_svg(const std::vector<LevelSummary>& summaries,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);

  std::vector<std::string> modes;
  for (const auto& s : summaries)
    if (std::find(modes.begin(), modes.end(), s.mode) == modes.end())
      modes.push_back(s.mode);

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : summaries) {
    if (s.n == 0) continue;
    xmin = std::min(xmin, log_safe(s.mean_delta));
    xmax = std::max(xmax, log_safe(s.mean_delta));
    ymin = std::min(ymin, log_safe(s.mean_error));
    ymax = std::max(ymax, log_safe(s.mean_error));
  }
  if (xmin > xmax) { xmin = 0.0; xmax = 1.0; }
  if (ymin > ymax) { ymin = 0.0; ymax = 1.0; }
  if (xmax - xmin < 1e-9) { xmin -= 0.5; xmax += 0.5; }
  if (ymax - ymin < 1e-9) { ymin -= 0.5; ymax += 0.5; }

  const double width = 640, height = 480;
  const double left = 70, right = 20, top = 20, bottom = 50;
  auto px = [&](double lx) {
    return left + (lx - xmin) / (xmax - xmin) * (width - left - right);
  };
  auto py = [&](double ly) {
    return height - bottom - (ly - ymin) / (ymax - ymin) * (height - top - bottom);
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
      << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\""
      << width - right << "\" y2=\"" << height - bottom
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
      << "\" y2=\"" << height - bottom << "\" stroke=\"black\"/>\n";

  // Decade ticks.
  for (int d = static_cast<int>(std::ceil(xmin)); d <= std::floor(xmax); ++d) {
    const double x = px(d);
    out << "<line x1=\"" << x << "\" y1=\"" << height - bottom << "\" x2=\""
        << x << "\" y2=\"" << height - bottom + 6 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << x << "\" y=\"" << height - bottom + 20
        << "\" font-size=\"11\" text-anchor=\"middle\">1e" << d << "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(ymin)); d <= std::floor(ymax); ++d) {
    const double y = py(d);
    out << "<line x1=\"" << left - 6 << "\" y1=\"" << y << "\" x2=\"" << left
        << "\" y2=\"" << y << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << left - 10 << "\" y=\"" << y + 4
        << "\" font-size=\"11\" text-anchor=\"end\">1e" << d << "</text>\n";
  }
  out << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 12
      << "\" font-size=\"13\" text-anchor=\"middle\">noise budget delta"
      << "</text>\n";
  out << "<text x=\"16\" y=\"" << (top + height - bottom) / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (top + height - bottom) / 2 << ")\">mean normalized l1 error</text>\n";

  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  for (std::size_t m = 0; m < modes.size(); ++m) {
    out << "<polyline fill=\"none\" stroke=\"" << colors[m % 4]
        << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& s : summaries)
      if (s.mode == modes[m] && s.n > 0)
        out << px(log_safe(s.mean_delta)) << ',' << py(log_safe(s.mean_error))
            << ' ';
    out << "\"/>\n";
    for (const auto& s : summaries)
      if (s.mode == modes[m] && s.n > 0)
        out << "<circle cx=\"" << px(log_safe(s.mean_delta)) << "\" cy=\""
            << py(log_safe(s.mean_error)) << "\" r=\"3\" fill=\""
            << colors[m % 4] << "\"/>\n";
    out << "<text x=\"" << width - right - 150 << "\" y=\"" << top + 18 + 16 * m
        << "\" font-size=\"12\" fill=\"" << colors[m % 4] << "\">" << modes[m]
        << "</text>\n";
  }
  out << "</svg>\n";
}

DemoOutputs run_recovery_demo(const ExperimentConfig& config) {
  config.validate();
  const ExperimentContext ctx = make_context(config);

  const std::uint64_t trial_seed = derive_seed(config.seed, 0, 0);
  DiracSignal truth = generate_support(config, ctx.grid, derive_seed(trial_seed, 1));
  truth.amplitudes = gen_amplitudes(truth.size(), derive_seed(trial_seed, 2));

  const HarmonicCoeffs clean = forward(truth, config.N);
  double sigma = 0.0;
  if (std::isfinite(config.sigma))
    sigma = config.sigma;
  else if (std::isfinite(config.snr_db))
    sigma = calibrate_sigma(clean, config.snr_db);
  const Measurement meas =
      add_noise(clean, sigma, derive_seed(trial_seed, 3), ctx.grid);

  SolveConfig sc = solver_config(config, meas.delta);
  sc.op_norm_hint = ctx.op_norm;
  const SolveResult result = solve_l1min(meas.s, *ctx.op, sc);

  DemoOutputs demo;
  demo.truth = truth;
  demo.s = meas.s;
  demo.recovery = result.g;
  demo.record.level = config.snr_db;
  demo.record.r = config.r;
  demo.record.seed = trial_seed;
  demo.record.mode = "l1min";
  demo.record.M = truth.size();
  demo.record.sigma = sigma;
  demo.record.snr_realized = meas.snr_db;
  demo.record.delta = meas.delta;
  demo.record.error = normalized_l1_error(result.g, truth);
  demo.record.residual_l1 = result.residual_l1;
  demo.record.objective = result.objective;
  demo.record.status = to_string(result.status);
  demo.record.iterations = result.iterations;
  demo.record.runtime_seconds = result.runtime_seconds;
  return demo;
}

}  // namespace spheresr
