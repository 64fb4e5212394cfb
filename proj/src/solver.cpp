#include "spheresr/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <vector>

#include "spheresr/csv.hpp"
#include "spheresr/rng.hpp"

namespace spheresr {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iters: return "max-iters";
    case SolveStatus::infeasible: return "infeasible";
  }
  return "unknown";
}

const char* to_string(SolveMode mode) {
  return mode == SolveMode::l1min ? "l1min" : "feasibility";
}

void SolveConfig::validate() const {
  if (!(delta >= 0.0)) throw InvalidParameterError("SolveConfig: delta must be >= 0");
  if (!(feas_tol > 0.0) || !(obj_tol > 0.0))
    throw InvalidParameterError("SolveConfig: tolerances must be > 0");
  if (max_iters < 1 || obj_window < 1 || check_every < 1)
    throw InvalidParameterError("SolveConfig: iteration counts must be >= 1");
  if (!(step_ratio > 0.0))
    throw InvalidParameterError("SolveConfig: step_ratio must be > 0");
}

Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double radius) {
  if (!(radius >= 0.0))
    throw InvalidParameterError("project_l1_ball: radius must be >= 0");
  if (radius == 0.0) return Eigen::VectorXd::Zero(v.size());
  if (v.lpNorm<1>() <= radius) return v;
  // Duchi et al. sort-and-threshold; exact up to rounding.
  std::vector<double> mags(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) mags[i] = std::abs(v[i]);
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  double prefix = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < mags.size(); ++j) {
    prefix += mags[j];
    const double cand = (prefix - radius) / static_cast<double>(j + 1);
    if (mags[j] > cand)
      theta = cand;
    else
      break;
  }
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double m = std::abs(v[i]) - theta;
    out[i] = m > 0.0 ? (v[i] > 0.0 ? m : -m) : 0.0;
  }
  return out;
}

double operator_norm(const Eigen::MatrixXd& K, int max_iters, double tol) {
  if (K.rows() != K.cols())
    throw InvalidParameterError("operator_norm: matrix must be square");
  Rng rng(0x5D1C3B2A17F06E94ull);  // fixed stream: step sizes are reproducible
  Eigen::VectorXd v(K.rows());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.gaussian();
  v.normalize();
  double prev = 0.0;
  int settled = 0;
  for (int iter = 0; iter < max_iters; ++iter) {
    Eigen::VectorXd w = K.selfadjointView<Eigen::Lower>() * v;
    const double lambda = w.norm();
    if (lambda == 0.0) return 0.0;
    v = w / lambda;
    if (std::abs(lambda - prev) <= tol * lambda) {
      if (++settled >= 2) return lambda;
    } else {
      settled = 0;
    }
    prev = lambda;
  }
  throw SolverError("operator_norm: power iteration did not converge in " +
                    std::to_string(max_iters) + " iterations");
}

namespace {

// The projection applied through its thin real factor, K x = B^T (B x).
struct ProjectionApply {
  const Eigen::MatrixXd& B;
  mutable Eigen::VectorXd coeffs;

  explicit ProjectionApply(const Eigen::MatrixXd& basis)
      : B(basis), coeffs(basis.rows()) {}

  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& out) const {
    coeffs.noalias() = B * x;
    out.noalias() = B.transpose() * coeffs;
  }
};

SolveResult run_primal_dual(const GriddedFunction& s, const MeasurementMatrix& m,
                            const SolveConfig& cfg, SolveMode mode) {
  cfg.validate();
  if (!s.grid || s.grid->L() != m.grid()->L() ||
      s.values.size() != m.grid()->size())
    throw DomainMismatchError("solve: s does not live on the operator's grid");
  if (!s.values.allFinite())
    throw SolverError("solve: s contains non-finite values");

  const auto t_start = std::chrono::steady_clock::now();
  const ProjectionApply P(m.real_basis());
  const Eigen::Index G = s.values.size();
  const double s_l1 = s.values.lpNorm<1>();
  const double feas_limit = cfg.delta * (1.0 + cfg.feas_tol) + 1e-9 * s_l1;

  const double norm_bound =
      (cfg.op_norm_hint > 0.0 ? cfg.op_norm_hint : operator_norm(m.kernel())) *
      1.01;
  const double tau = cfg.step_ratio / norm_bound;
  const double sigma = 1.0 / (cfg.step_ratio * norm_bound);

  std::ofstream trace;
  if (!cfg.trace_path.empty()) {
    trace.open(cfg.trace_path);
    if (!trace) throw SolverError("solve: cannot open trace file " + cfg.trace_path);
    trace << "iter,objective,residual_l1,primal_step,dual_step\n";
  }

  Eigen::VectorXd g = Eigen::VectorXd::Zero(G);
  Eigen::VectorXd g_bar = Eigen::VectorXd::Zero(G);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(G);
  Eigen::VectorXd v(G), w(G), g_prev(G), Kx(G);

  // The iterate hovers around the constraint boundary while it converges, so
  // checkpoints keep the best admissible point seen: in l1min mode the
  // lowest-objective feasible iterate, in feasibility mode the
  // lowest-residual iterate.  The run stops once that incumbent has not
  // improved by more than obj_tol (relative) for obj_window iterations.
  Eigen::VectorXd best_g;
  double best_value = std::numeric_limits<double>::infinity();
  double best_residual = std::numeric_limits<double>::infinity();
  double best_objective = std::numeric_limits<double>::infinity();
  bool have_best = false;
  // Fallback if no feasible point ever shows up in l1min mode.
  Eigen::VectorXd nearest_g = g;
  double nearest_residual = s_l1;
  double nearest_objective = 0.0;

  // Near the optimum the objective flattens while mass is still relocating,
  // so l1min additionally requires the iterate itself to settle: relative l1
  // movement per window below sqrt(obj_tol).
  const double move_tol = std::sqrt(cfg.obj_tol);
  Eigen::VectorXd move_snapshot = g;
  long move_snapshot_iter = 0;
  bool move_settled = false;

  long last_improvement_iter = 0;
  long iter = 0;
  bool stopped = false;

  while (iter < cfg.max_iters) {
    ++iter;
    // Dual ascent on the residual constraint.
    P.apply(g_bar, Kx);
    v = p + sigma * Kx;
    if (mode == SolveMode::l1min) {
      // prox of the conjugate of ind{||s - u||_1 <= delta}, via Moreau.
      w = v / sigma - s.values;
      p = v - sigma * (s.values + project_l1_ball(w, cfg.delta));
    } else {
      p = (v - sigma * s.values).cwiseMin(1.0).cwiseMax(-1.0);
    }
    // Primal descent with nonnegativity; l1min also pays the unit cost.
    g_prev = g;
    P.apply(p, w);
    w = g - tau * w;
    if (mode == SolveMode::l1min) w.array() -= tau;
    g = w.cwiseMax(0.0);
    g_bar = 2.0 * g - g_prev;

    if (iter % cfg.check_every == 0 || iter == cfg.max_iters) {
      P.apply(g, Kx);
      const double residual = (s.values - Kx).lpNorm<1>();
      const double objective = g.sum();
      const bool feasible_now = residual <= feas_limit;

      const bool admissible =
          mode == SolveMode::feasibility || feasible_now;
      const double value = mode == SolveMode::l1min ? objective : residual;
      if (admissible && value < best_value) {
        if (value < best_value - cfg.obj_tol * std::max(1.0, std::abs(value)))
          last_improvement_iter = iter;
        best_value = value;
        best_residual = residual;
        best_objective = objective;
        best_g = g;
        have_best = true;
      }
      if (residual < nearest_residual) {
        nearest_residual = residual;
        nearest_objective = objective;
        nearest_g = g;
      }
      if (iter - move_snapshot_iter >= cfg.obj_window) {
        const double movement = (g - move_snapshot).lpNorm<1>() /
                                std::max(1.0, g.lpNorm<1>());
        move_settled = movement <= move_tol;
        move_snapshot = g;
        move_snapshot_iter = iter;
      }

      if (trace.is_open() && iter % cfg.trace_every == 0)
        trace << iter << ',' << format_g17(objective) << ','
              << format_g17(residual) << ',' << format_g17(tau) << ','
              << format_g17(sigma) << '\n';

      // Stop only from an admissible checkpoint: early isolated feasible
      // dips must not end the run while the iterate is still far out.  An
      // incumbent still above the budget gets extended patience before the
      // residual counts as minimized.
      const long patience = best_residual <= feas_limit ? cfg.obj_window
                                                        : 20 * cfg.obj_window;
      if (have_best && admissible && iter >= cfg.min_iters &&
          iter - last_improvement_iter >= patience &&
          (mode == SolveMode::feasibility || move_settled)) {
        stopped = true;
        break;
      }
    }
  }

  SolveResult result;
  if (have_best) {
    result.g = GriddedFunction{s.grid, best_g.cwiseMax(0.0)};
    result.residual_l1 = best_residual;
    result.objective = best_objective;
  } else {
    result.g = GriddedFunction{s.grid, nearest_g.cwiseMax(0.0)};
    result.residual_l1 = nearest_residual;
    result.objective = nearest_objective;
  }
  result.iterations = iter;
  if (result.residual_l1 <= feas_limit)
    result.status = stopped ? SolveStatus::converged : SolveStatus::max_iters;
  else
    result.status = stopped ? SolveStatus::infeasible : SolveStatus::max_iters;
  result.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return result;
}

}  // namespace

SolveResult solve_feasibility(const GriddedFunction& s,
                              const MeasurementMatrix& m, SolveConfig config) {
  config.mode = SolveMode::feasibility;
  return run_primal_dual(s, m, config, SolveMode::feasibility);
}

SolveResult solve_l1min(const GriddedFunction& s, const MeasurementMatrix& m,
                        SolveConfig config) {
  config.mode = SolveMode::l1min;
  return run_primal_dual(s, m, config, SolveMode::l1min);
}

DiracSignal extract_spikes(const GriddedFunction& g, double threshold_frac) {
  if (!(threshold_frac > 0.0 && threshold_frac < 1.0))
    throw InvalidParameterError("extract_spikes: threshold_frac must be in (0, 1)");
  if (!g.grid) throw InvalidParameterError("extract_spikes: missing grid");

  DiracSignal out;
  out.grid = g.grid;
  const double peak = g.values.size() > 0 ? g.values.maxCoeff() : 0.0;
  if (peak <= 0.0) {
    out.amplitudes = Eigen::VectorXd(0);
    return out;
  }

  std::vector<int> picked;
  for (Eigen::Index i = 0; i < g.values.size(); ++i)
    if (g.values[i] >= threshold_frac * peak) picked.push_back(static_cast<int>(i));

  // Single-linkage union-find at one grid step.
  const double merge_radius = 2.0 * M_PI / g.grid->L() + 1e-12;
  std::vector<int> parent(picked.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (std::size_t i = 0; i + 1 < picked.size(); ++i)
    for (std::size_t j = i + 1; j < picked.size(); ++j)
      if (geodesic_distance(g.grid->point(picked[i]), g.grid->point(picked[j])) <=
          merge_radius)
        parent[find(static_cast<int>(i))] = find(static_cast<int>(j));

  struct Cluster {
    int rep_index = -1;
    double rep_value = 0.0;
    double mass = 0.0;
  };
  std::map<int, Cluster> clusters;
  for (std::size_t i = 0; i < picked.size(); ++i) {
    Cluster& c = clusters[find(static_cast<int>(i))];
    const double value = g.values[picked[i]];
    c.mass += value;
    if (value > c.rep_value) {
      c.rep_value = value;
      c.rep_index = picked[i];
    }
  }

  std::vector<std::pair<int, double>> spikes;
  for (const auto& [root, c] : clusters) spikes.emplace_back(c.rep_index, c.mass);
  std::sort(spikes.begin(), spikes.end());
  out.amplitudes.resize(spikes.size());
  for (std::size_t i = 0; i < spikes.size(); ++i) {
    out.support.push_back(spikes[i].first);
    out.amplitudes[i] = spikes[i].second;
  }
  return out;
}

}  // namespace spheresr
