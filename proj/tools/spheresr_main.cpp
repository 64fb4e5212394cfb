// Command-line harness: signal generation, measurement, recovery, and the
// noise / regularity sweeps, all on the uniform sphere grid.
//
// Exit codes: 0 success, 2 invalid configuration or inputs, 3 solver failure
// in single-solve mode.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "spheresr/csv.hpp"
#include "spheresr/experiments.hpp"
#include "spheresr/signal_gen.hpp"
#include "spheresr/solver.hpp"

using namespace spheresr;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_double_list(text)) out.push_back(static_cast<int>(v));
  return out;
}

void print_record(const TrialRecord& rec) {
  std::cout << "mode=" << rec.mode << " M=" << rec.M
            << " sigma=" << format_g17(rec.sigma)
            << " snr_db=" << format_g17(rec.snr_realized)
            << " delta=" << format_g17(rec.delta)
            << " error=" << format_g17(rec.error)
            << " residual_l1=" << format_g17(rec.residual_l1)
            << " objective=" << format_g17(rec.objective)
            << " status=" << rec.status << " iterations=" << rec.iterations
            << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse positive recovery on the sphere from low-degree "
               "spherical harmonics"};
  app.set_config("--config", "", "flat key=value file with option defaults");
  app.require_subcommand(1);
  app.fallthrough(true);  // shared options may follow the subcommand name

  ExperimentConfig cfg;
  std::string mode_name = "both";
  std::string mu_scale_name = "fixed";
  std::string snr_list, sigma_list, r_list = "1,2,3,4";
  std::string out_prefix = "spheresr_out";

  // Shared options live on the parent so a flat config file covers them all.
  app.add_option("--L", cfg.L, "grid parameter (target resolution)");
  app.add_option("--N", cfg.N, "maximum measured harmonic degree");
  app.add_option("--r", cfg.r, "regularity parameter (number of cells)");
  app.add_option("--nu", cfg.nu, "separation constant");
  app.add_option("--mu-scale", mu_scale_name,
                 "per-cell separation: fixed (nu/N) or theorem (nu*r/N)");
  app.add_option("--ppc", cfg.points_per_cell, "support points per cell");
  app.add_option("--M", cfg.total_points,
                 "total support points, distributed round-robin (overrides --ppc)");
  app.add_option("--snr", cfg.snr_db, "target SNR in dB for noise synthesis");
  app.add_option("--sigma", cfg.sigma, "noise standard deviation");
  app.add_option("--delta", cfg.delta_override,
                 "solver noise budget (default: realized oracle value)");
  app.add_option("--trials", cfg.trials, "trials per sweep level");
  app.add_option("--seed", cfg.seed, "master seed");
  app.add_option("--mode", mode_name, "feasibility | l1min | both");
  app.add_option("--max-iters", cfg.max_iters, "solver iteration cap");
  app.add_option("--min-iters", cfg.min_iters, "solver iteration floor");
  app.add_option("--feas-tol", cfg.feas_tol, "relative feasibility tolerance");
  app.add_option("--obj-tol", cfg.obj_tol, "relative stagnation tolerance");
  app.add_option("--obj-window", cfg.obj_window,
                 "stagnation window in iterations");
  app.add_option("--step-ratio", cfg.step_ratio, "primal/dual step balance");
  app.add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
  app.add_option("--out-prefix", out_prefix, "prefix for sweep output files");

  auto* gen = app.add_subcommand("gen", "generate a random signal CSV");
  std::string gen_out = "signal.csv", gen_grid_out;
  gen->add_option("--out", gen_out, "signal CSV path");
  gen->add_option("--out-grid", gen_grid_out, "also write the grid CSV here");

  auto* measure = app.add_subcommand(
      "measure", "project a signal CSV to noisy coefficients and s");
  std::string meas_signal = "signal.csv", meas_coeffs = "coeffs.csv",
              meas_s = "s.csv", meas_meta;
  measure->add_option("--signal", meas_signal, "input signal CSV");
  measure->add_option("--out-coeffs", meas_coeffs, "noisy coefficient CSV");
  measure->add_option("--out-s", meas_s, "back-projected measurement CSV");
  measure->add_option("--out-meta", meas_meta,
                      "key=value file with sigma, delta, snr");

  auto* solve = app.add_subcommand("solve", "recover a signal from s");
  std::string solve_s = "s.csv", solve_out = "recovery.csv", solve_trace;
  solve->add_option("--s", solve_s, "measurement CSV (index,value)");
  solve->add_option("--out", solve_out, "recovery CSV (index,value)");
  solve->add_option("--trace", solve_trace, "solver trace CSV");

  auto* sweep_noise_cmd =
      app.add_subcommand("sweep-noise", "error vs noise level, both modes");
  sweep_noise_cmd->add_option("--snr-list", snr_list,
                              "comma-separated SNR levels in dB");
  sweep_noise_cmd->add_option("--sigma-list", sigma_list,
                              "comma-separated sigma levels");

  auto* sweep_r_cmd =
      app.add_subcommand("sweep-r", "error vs Rayleigh regularity");
  sweep_r_cmd->add_option("--r-list", r_list, "comma-separated r values");

  auto* demo = app.add_subcommand(
      "demo-fig1", "showcase recovery: L=60, N=15, r=3, M=41, SNR 30 dB");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.mode = parse_run_mode(mode_name);
    cfg.mu_scaling = parse_mu_scaling(mu_scale_name);
    cfg.out_prefix = out_prefix;

    if (*gen) {
      cfg.validate();
      const auto grid = build_grid(cfg.L);
      const double mu =
          cfg.mu_scaling == MuScaling::theorem_class ? cfg.nu * cfg.r : cfg.nu;
      std::vector<int> sizes;
      if (cfg.total_points > 0) {
        sizes.assign(cfg.r, cfg.total_points / cfg.r);
        for (int i = 0; i < cfg.total_points % cfg.r; ++i) ++sizes[i];
      } else {
        sizes.assign(cfg.r, cfg.points_per_cell);
      }
      DiracSignal sig =
          gen_support_cells(mu, cfg.N, grid, sizes, derive_seed(cfg.seed, 0, 1));
      sig.amplitudes = gen_amplitudes(sig.size(), derive_seed(cfg.seed, 0, 2));
      write_signal_csv(sig, gen_out);
      if (!gen_grid_out.empty()) write_grid_csv(*grid, gen_grid_out);
      std::cout << "wrote " << gen_out << " with M=" << sig.size()
                << " points (r=" << cfg.r << ")\n";
      return 0;
    }

    if (*measure) {
      const auto grid = build_grid(cfg.L);
      const DiracSignal sig = read_signal_csv(meas_signal, grid);
      const HarmonicCoeffs clean = forward(sig, cfg.N);
      double sigma = 0.0;
      if (std::isfinite(cfg.sigma))
        sigma = cfg.sigma;
      else if (std::isfinite(cfg.snr_db))
        sigma = calibrate_sigma(clean, cfg.snr_db);
      const Measurement m =
          add_noise(clean, sigma, derive_seed(cfg.seed, 0, 3), grid);
      write_coeffs_csv(m.noisy, meas_coeffs);
      write_gridded_csv(m.s, meas_s);
      std::ostringstream meta;
      meta << "sigma=" << format_g17(sigma) << "\n"
           << "delta=" << format_g17(m.delta) << "\n"
           << "snr_db=" << format_g17(m.snr_db) << "\n"
           << "srf=" << format_g17(cfg.srf()) << "\n";
      std::cout << meta.str();
      if (!meas_meta.empty()) {
        std::ofstream out(meas_meta);
        out << meta.str();
      }
      return 0;
    }

    if (*solve) {
      if (!std::isfinite(cfg.delta_override) || cfg.delta_override < 0.0)
        throw InvalidParameterError("solve: provide --delta >= 0");
      const auto grid = build_grid(cfg.L);
      const GriddedFunction s = read_gridded_csv(solve_s, grid);
      const auto op = projection_kernel(grid, cfg.N);
      SolveConfig sc;
      sc.delta = cfg.delta_override;
      sc.feas_tol = cfg.feas_tol;
      sc.obj_tol = cfg.obj_tol;
      sc.max_iters = cfg.max_iters;
      sc.min_iters = cfg.min_iters;
      sc.step_ratio = cfg.step_ratio;
      sc.trace_path = solve_trace;
      const SolveResult res = cfg.mode == RunMode::feasibility
                                  ? solve_feasibility(s, *op, sc)
                                  : solve_l1min(s, *op, sc);
      write_gridded_csv(res.g, solve_out);
      std::cout << "status=" << to_string(res.status)
                << " residual_l1=" << format_g17(res.residual_l1)
                << " objective=" << format_g17(res.objective)
                << " iterations=" << res.iterations << "\n";
      return res.status == SolveStatus::converged ? 0 : 3;
    }

    if (*sweep_noise_cmd) {
      std::vector<double> levels;
      bool levels_are_snr = true;
      if (!sigma_list.empty()) {
        levels = parse_double_list(sigma_list);
        levels_are_snr = false;
      } else if (!snr_list.empty()) {
        levels = parse_double_list(snr_list);
      } else {
        levels = {10.0, 20.0, 30.0, 40.0, 50.0};
      }
      const SweepResult result = sweep_noise(cfg, levels, levels_are_snr);
      write_trials_csv(result.records, cfg.out_prefix + "_noise_trials.csv");
      write_summary_csv(result.summaries, cfg.out_prefix + "_noise_summary.csv");
      write_loglog_svg(result.summaries, cfg.out_prefix + "_noise.svg");
      for (const auto& s : result.summaries)
        std::cout << "level=" << format_g17(s.level) << " mode=" << s.mode
                  << " mean_error=" << format_g17(s.mean_error)
                  << " max_error=" << format_g17(s.max_error)
                  << " mean_delta=" << format_g17(s.mean_delta) << "\n";
      return 0;
    }

    if (*sweep_r_cmd) {
      const SweepResult result = sweep_regularity(cfg, parse_int_list(r_list));
      write_trials_csv(result.records, cfg.out_prefix + "_r_trials.csv");
      write_summary_csv(result.summaries, cfg.out_prefix + "_r_summary.csv");
      for (const auto& s : result.summaries)
        std::cout << "r=" << s.level << " mode=" << s.mode
                  << " mean_error=" << format_g17(s.mean_error)
                  << " max_error=" << format_g17(s.max_error) << "\n";
      return 0;
    }

    if (*demo) {
      ExperimentConfig demo_cfg = cfg;
      demo_cfg.L = 60;
      demo_cfg.N = 15;
      demo_cfg.r = 3;
      demo_cfg.total_points = 41;
      demo_cfg.snr_db = 30.0;
      demo_cfg.sigma = kNaN;
      const DemoOutputs out = run_recovery_demo(demo_cfg);
      write_signal_csv(out.truth, cfg.out_prefix + "_truth.csv");
      write_gridded_csv(out.s, cfg.out_prefix + "_s.csv");
      write_gridded_csv(out.recovery, cfg.out_prefix + "_recovery.csv");
      std::cout << "srf=" << format_g17(demo_cfg.srf()) << "\n";
      print_record(out.record);
      return out.record.status == std::string("converged") ? 0 : 3;
    }
  } catch (const InvalidParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
