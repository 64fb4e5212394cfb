#pragma once

#include <Eigen/Dense>
#include <string>

#include "spheresr/operators.hpp"
#include "spheresr/signal.hpp"

namespace spheresr {

// Solves the recovery program on the grid:
//
//   find g >= 0  subject to  ||s - K g||_l1 <= delta            (feasibility)
//   min sum(g)   subject to  g >= 0, ||s - K g||_l1 <= delta    (l1min)
//
// Both run the same primal-dual first-order iteration (Chambolle-Pock with
// theta = 1).  Feasibility mode returns the canonical feasible point that
// minimizes ||s - K g||_l1 over g >= 0; its dual prox is a clamp to [-1, 1].
// l1min mode's dual prox is an exact Euclidean projection onto the l1 ball of
// radius delta centered at s, via Moreau.  Step sizes come from a seeded
// power-iteration estimate of ||K||, so repeated solves are bit-identical.

enum class SolveMode { feasibility, l1min };
enum class SolveStatus { converged, max_iters, infeasible };

const char* to_string(SolveStatus status);
const char* to_string(SolveMode mode);

struct SolveConfig {
  double delta = 0.0;
  SolveMode mode = SolveMode::l1min;
  double feas_tol = 1e-6;   // relative feasibility tolerance
  double obj_tol = 1e-8;    // relative stagnation tolerance
  long obj_window = 100;    // stagnation window, in iterations
  long max_iters = 200000;
  long min_iters = 1000;    // stagnation cannot stop earlier than this
  double step_ratio = 1.0;  // primal/dual step balance
  long check_every = 25;    // residual/objective checkpoint cadence
  double op_norm_hint = 0.0;  // > 0 skips the power iteration (e.g. in sweeps)
  std::string trace_path;     // non-empty: CSV trace every trace_every iters
  long trace_every = 100;

  void validate() const;
};

struct SolveResult {
  GriddedFunction g;        // entrywise >= 0
  double residual_l1 = 0.0;  // ||s - K g||_l1 at the returned g
  double objective = 0.0;    // sum(g) = ||g||_l1
  SolveStatus status = SolveStatus::max_iters;
  long iterations = 0;
  double runtime_seconds = 0.0;
};

/// Exact Euclidean projection onto {x : ||x||_l1 <= radius}.
Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double radius);

/// Largest eigenvalue of the symmetric PSD matrix K by seeded power
/// iteration; throws SolverError if it has not settled within max_iters.
double operator_norm(const Eigen::MatrixXd& K, int max_iters = 500,
                     double tol = 1e-7);

/// Canonical feasible point: minimizes ||s - K g||_l1 over g >= 0, then
/// reports infeasible if even that minimum exceeds delta * (1 + feas_tol).
SolveResult solve_feasibility(const GriddedFunction& s,
                              const MeasurementMatrix& m, SolveConfig config);

/// Minimizes sum(g) over the feasible set.
SolveResult solve_l1min(const GriddedFunction& s, const MeasurementMatrix& m,
                        SolveConfig config);

/// Diagnostic support read-out: grid points with g >= threshold_frac * max(g),
/// single-linkage merged at one grid step (2 pi / L), one spike per cluster at
/// its largest sample with the cluster's total mass as amplitude.
DiracSignal extract_spikes(const GriddedFunction& g, double threshold_frac);

}  // namespace spheresr
