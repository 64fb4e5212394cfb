#pragma once

#include <cmath>
#include <vector>

// Slow closed-form references, independent of the library's recurrences.

namespace testsupport {

/// Monomial coefficients of P_n, built by Bonnet's recurrence on coefficient
/// vectors in long double.  Exact enough for n up to ~12.
inline std::vector<long double> legendre_coefficients(int n) {
  std::vector<long double> pm1{1.0L};
  if (n == 0) return pm1;
  std::vector<long double> p{0.0L, 1.0L};
  for (int m = 2; m <= n; ++m) {
    std::vector<long double> next(m + 1, 0.0L);
    for (std::size_t i = 0; i < p.size(); ++i)
      next[i + 1] += (2.0L * m - 1.0L) / m * p[i];
    for (std::size_t i = 0; i < pm1.size(); ++i)
      next[i] -= (m - 1.0L) / m * pm1[i];
    pm1 = std::move(p);
    p = std::move(next);
  }
  return p;
}

/// P_{n,k}(x) = (1-x^2)^{k/2} d^k/dx^k P_n(x), no Condon-Shortley phase.
inline long double assoc_legendre_reference(int n, int k, long double x) {
  std::vector<long double> coef = legendre_coefficients(n);
  for (int d = 0; d < k; ++d) {
    std::vector<long double> der(coef.size() > 1 ? coef.size() - 1 : 1, 0.0L);
    for (std::size_t i = 1; i < coef.size(); ++i)
      der[i - 1] = coef[i] * static_cast<long double>(i);
    coef = std::move(der);
  }
  long double value = 0.0L;
  for (std::size_t i = coef.size(); i-- > 0;) value = value * x + coef[i];
  return value * std::pow(1.0L - x * x, k / 2.0L);
}

}  // namespace testsupport
