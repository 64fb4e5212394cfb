#include "support/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace testsupport {

std::vector<QuadNode> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  std::vector<QuadNode> nodes(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // P_n(x) and P_{n-1}(x) by the three-term recurrence.
      double pm1 = 1.0, p = x;
      for (int m = 2; m <= n; ++m) {
        const double next = ((2 * m - 1) * x * p - (m - 1) * pm1) / m;
        pm1 = p;
        p = next;
      }
      dp = n * (x * p - pm1) / (x * x - 1.0);
      const double step = p / dp;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    nodes[i].x = x;
    nodes[i].w = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return nodes;
}

}  // namespace testsupport
