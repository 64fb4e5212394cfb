#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "spheresr/errors.hpp"
#include "spheresr/sphere_grid.hpp"

namespace spheresr {

// Complex spherical harmonics Y_{n,k} = A_{n,k} e^{i k phi} P_{n,|k|}(cos theta).
//
// The associated Legendre functions here carry no Condon-Shortley phase and
// negative orders are defined by P_{n,-k} := P_{n,|k|}.  With A_{n,k} built
// from |k| this gives Y_{n,-k} = conj(Y_{n,k}) and an exactly orthonormal
// basis; only coefficient phases depend on this convention.

/// Degree/order pair, |k| <= n.
struct HarmonicIndex {
  int n = 0;
  int k = 0;
};

/// Number of harmonics of degree <= N.
inline int coeff_count(int N) { return (N + 1) * (N + 1); }

/// Flat position of (n, k) in the packed coefficient vector: n^2 + n + k.
inline int coeff_index(int n, int k) { return n * n + n + k; }

/// Inverse of coeff_index.
inline HarmonicIndex coeff_unindex(int i) {
  const int n = static_cast<int>(std::sqrt(static_cast<double>(i)));
  return {n, i - n * n - n};
}

/// Legendre polynomial P_n(x) by the Bonnet three-term recurrence.
template <typename Scalar>
Scalar legendre(int n, Scalar x) {
  if (n < 0) throw InvalidParameterError("legendre: n must be >= 0");
  if (n == 0) return Scalar(1);
  Scalar prev = Scalar(1);
  Scalar cur = x;
  for (int m = 2; m <= n; ++m) {
    Scalar next = (Scalar(2 * m - 1) * x * cur - Scalar(m - 1) * prev) / Scalar(m);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// P_0(x), ..., P_N(x) in one sweep.
Eigen::VectorXd legendre_all(int N, double x);

/// Associated Legendre function P_{n,k}(x), 0 <= k <= n, |x| <= 1, without
/// the Condon-Shortley phase.  Ascending-degree recurrence started from the
/// diagonal P_{k,k}(x) = (2k-1)!! (1-x^2)^{k/2}.
template <typename Scalar>
Scalar assoc_legendre(int n, int k, Scalar x) {
  if (n < 0 || k < 0 || k > n)
    throw InvalidParameterError("assoc_legendre: need 0 <= k <= n");
  if (!(x >= Scalar(-1) && x <= Scalar(1)))
    throw InvalidParameterError("assoc_legendre: need |x| <= 1");
  Scalar pkk = Scalar(1);
  if (k > 0) {
    const Scalar s = std::sqrt((Scalar(1) - x) * (Scalar(1) + x));
    Scalar odd = Scalar(1);
    for (int i = 1; i <= k; ++i) {
      pkk *= odd * s;
      odd += Scalar(2);
    }
  }
  if (n == k) return pkk;
  Scalar prev = pkk;                          // P_{k,k}
  Scalar cur = x * Scalar(2 * k + 1) * pkk;   // P_{k+1,k}
  for (int m = k + 2; m <= n; ++m) {
    Scalar next =
        (Scalar(2 * m - 1) * x * cur - Scalar(m + k - 1) * prev) / Scalar(m - k);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Orthonormalization constant A_{n,k} = sqrt((2n+1)/(4 pi) * (n-|k|)!/(n+|k|)!).
/// The factorial ratio is evaluated in log space so large degrees do not
/// overflow.
double normalization(int n, int k);

/// Y_{n,k} at a point, any |k| <= n.
std::complex<double> eval_Y(int n, int k, const SpherePoint& x);

/// All Y_{n,k}(x) for n <= N in coeff_index packing; shares one recurrence
/// sweep per order instead of (N+1)^2 independent evaluations.
Eigen::VectorXcd eval_Y_all(int N, const SpherePoint& x);

}  // namespace spheresr
