#pragma once

#include <Eigen/Dense>

// Exact dense-simplex LP oracle for cross-checking the shipped first-order
// solver on small instances.  Test-only; deliberately independent of the
// library's solve path.

namespace testsupport {

struct LpSolution {
  bool feasible = false;
  double objective = 0.0;
  Eigen::VectorXd x;
};

/// min c'x subject to A x <= b, x >= 0 (b of any sign).  Two-phase tableau
/// simplex, Dantzig pricing with a Bland fallback against cycling.  Throws
/// std::runtime_error on pivot-budget exhaustion or unbounded problems.
LpSolution simplex_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                         const Eigen::VectorXd& c);

/// min sum(g) subject to g >= 0 and ||s - K g||_1 <= delta, via the epigraph
/// form with variables [g; t]:  -Kg - t <= -s,  Kg - t <= s,  sum(t) <= delta.
/// Returns the optimal objective and g.
LpSolution l1min_lp(const Eigen::MatrixXd& K, const Eigen::VectorXd& s,
                    double delta);

}  // namespace testsupport
