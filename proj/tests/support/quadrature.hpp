#pragma once

#include <vector>

namespace testsupport {

struct QuadNode {
  double x;
  double w;
};

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton on P_n), exact for
/// polynomials of degree <= 2n - 1.
std::vector<QuadNode> gauss_legendre(int n);

}  // namespace testsupport
