#include "spheresr/harmonics.hpp"

namespace spheresr {

namespace {
constexpr double kFourPi = 12.566370614359172953850573533118;
}

Eigen::VectorXd legendre_all(int N, double x) {
  if (N < 0) throw InvalidParameterError("legendre_all: N must be >= 0");
  Eigen::VectorXd out(N + 1);
  out[0] = 1.0;
  if (N == 0) return out;
  out[1] = x;
  for (int m = 2; m <= N; ++m)
    out[m] = ((2 * m - 1) * x * out[m - 1] - (m - 1) * out[m - 2]) / m;
  return out;
}

double normalization(int n, int k) {
  const int a = std::abs(k);
  if (n < 0 || a > n)
    throw InvalidParameterError("normalization: need |k| <= n");
  const double log_ratio = std::lgamma(n - a + 1.0) - std::lgamma(n + a + 1.0);
  return std::sqrt((2.0 * n + 1.0) / kFourPi) * std::exp(0.5 * log_ratio);
}

std::complex<double> eval_Y(int n, int k, const SpherePoint& x) {
  const int a = std::abs(k);
  if (n < 0 || a > n) throw InvalidParameterError("eval_Y: need |k| <= n");
  const double v = normalization(n, a) * assoc_legendre(n, a, std::cos(x.theta));
  const double kphi = k * x.phi;
  return {v * std::cos(kphi), v * std::sin(kphi)};
}

Eigen::VectorXcd eval_Y_all(int N, const SpherePoint& x) {
  if (N < 0) throw InvalidParameterError("eval_Y_all: N must be >= 0");
  Eigen::VectorXcd out(coeff_count(N));
  const double c = std::cos(x.theta);
  const double s = std::sqrt((1.0 - c) * (1.0 + c));
  double pkk = 1.0;
  double odd = 1.0;
  for (int k = 0; k <= N; ++k) {
    if (k > 0) {
      pkk *= odd * s;  // P_{k,k}
      odd += 2.0;
    }
    const std::complex<double> phase{std::cos(k * x.phi), std::sin(k * x.phi)};
    double pm2 = 0.0;
    double pm1 = 0.0;
    for (int n = k; n <= N; ++n) {
      double pnk;
      if (n == k)
        pnk = pkk;
      else if (n == k + 1)
        pnk = c * (2 * k + 1) * pkk;
      else
        pnk = ((2 * n - 1) * c * pm1 - (n + k - 1) * pm2) / (n - k);
      const double v = normalization(n, k) * pnk;
      out[coeff_index(n, k)] = v * phase;
      if (k > 0) out[coeff_index(n, -k)] = std::conj(v * phase);
      pm2 = pm1;
      pm1 = pnk;
    }
  }
  return out;
}

}  // namespace spheresr
