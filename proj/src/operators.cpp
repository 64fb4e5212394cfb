#include "spheresr/operators.hpp"

#include <cmath>

namespace spheresr {

namespace {
constexpr double kFourPi = 12.566370614359172953850573533118;
}

bool HarmonicCoeffs::check_real_symmetric(double tol) const {
  if (values.size() != coeff_count(N)) return false;
  for (int n = 0; n <= N; ++n) {
    if (std::abs(at(n, 0).imag()) > tol) return false;
    for (int k = 1; k <= n; ++k)
      if (std::abs(at(n, -k) - std::conj(at(n, k))) > tol) return false;
  }
  return true;
}

MeasurementMatrix::MeasurementMatrix(std::shared_ptr<const SphereGrid> grid, int N)
    : grid_(std::move(grid)), N_(N) {
  if (!grid_) throw InvalidParameterError("MeasurementMatrix: missing grid");
  if (N < 0) throw InvalidParameterError("MeasurementMatrix: N must be >= 0");
  const int G = grid_->size();
  A_.resize(coeff_count(N), G);
  for (int j = 0; j < G; ++j)
    A_.col(j) = eval_Y_all(N, grid_->point(j)).conjugate();
}

const Eigen::MatrixXd& MeasurementMatrix::kernel() const {
  std::call_once(kernel_once_, [this] {
    const int G = grid_->size();
    const auto& U = grid_->unit_vectors();
    Eigen::MatrixXd K(G, G);
    // Column-by-column Legendre sweep on the clamped pairwise dot products;
    // only the lower triangle is computed, then mirrored.
    Eigen::VectorXd c, pm1, pm2, acc;
    for (int j = 0; j < G; ++j) {
      const auto rows = G - j;
      c = (U.bottomRows(rows) * U.row(j).transpose())
              .cwiseMin(1.0)
              .cwiseMax(-1.0);
      pm2 = Eigen::VectorXd::Ones(rows);             // P_0
      acc = (1.0 / kFourPi) * pm2;
      if (N_ >= 1) {
        pm1 = c;                                     // P_1
        acc += (3.0 / kFourPi) * pm1;
        for (int n = 2; n <= N_; ++n) {
          Eigen::VectorXd pn =
              ((2 * n - 1) * c.cwiseProduct(pm1) - (n - 1) * pm2) / n;
          acc += ((2.0 * n + 1.0) / kFourPi) * pn;
          pm2.swap(pm1);
          pm1.swap(pn);
        }
      }
      K.col(j).tail(rows) = acc;
    }
    K.triangularView<Eigen::StrictlyUpper>() =
        K.triangularView<Eigen::StrictlyLower>().transpose();
    K_ = std::move(K);
  });
  return K_;
}

const Eigen::MatrixXd& MeasurementMatrix::real_basis() const {
  std::call_once(basis_once_, [this] {
    // A[(n,k), j] = conj(Y_{n,k}(x_j)), so Re Y = Re A and Im Y = -Im A.
    const double root2 = std::sqrt(2.0);
    Eigen::MatrixXd B(A_.rows(), A_.cols());
    for (int n = 0; n <= N_; ++n) {
      B.row(coeff_index(n, 0)) = A_.row(coeff_index(n, 0)).real();
      for (int k = 1; k <= n; ++k) {
        B.row(coeff_index(n, k)) = root2 * A_.row(coeff_index(n, k)).real();
        B.row(coeff_index(n, -k)) = -root2 * A_.row(coeff_index(n, k)).imag();
      }
    }
    B_ = std::move(B);
  });
  return B_;
}

double kernel_value(int N, double cos_rho) {
  if (N < 0) throw InvalidParameterError("kernel_value: N must be >= 0");
  const double c = std::clamp(cos_rho, -1.0, 1.0);
  const Eigen::VectorXd p = legendre_all(N, c);
  double acc = 0.0;
  for (int n = 0; n <= N; ++n) acc += (2.0 * n + 1.0) / kFourPi * p[n];
  return acc;
}

std::shared_ptr<const MeasurementMatrix> projection_kernel(
    std::shared_ptr<const SphereGrid> grid, int N) {
  auto m = std::make_shared<const MeasurementMatrix>(std::move(grid), N);
  m->kernel();
  return m;
}

HarmonicCoeffs forward(const DiracSignal& signal, int N) {
  signal.validate();
  HarmonicCoeffs y = HarmonicCoeffs::zero(N);
  for (int m = 0; m < signal.size(); ++m)
    y.values += signal.amplitudes[m] *
                eval_Y_all(N, signal.grid->point(signal.support[m])).conjugate();
  return y;
}

GriddedFunction adjoint(const HarmonicCoeffs& coeffs,
                        std::shared_ptr<const SphereGrid> grid) {
  if (!grid) throw InvalidParameterError("adjoint: missing grid");
  if (coeffs.values.size() != coeff_count(coeffs.N))
    throw InvalidParameterError("adjoint: coefficient vector has wrong length");
  const int G = grid->size();
  Eigen::VectorXd out(G);
  double max_abs = 0.0;
  double max_imag = 0.0;
  for (int j = 0; j < G; ++j) {
    const std::complex<double> v =
        eval_Y_all(coeffs.N, grid->point(j)).cwiseProduct(coeffs.values).sum();
    out[j] = v.real();
    max_abs = std::max(max_abs, std::abs(v));
    max_imag = std::max(max_imag, std::abs(v.imag()));
  }
  if (coeffs.real_symmetric && max_imag > 1e-8 * max_abs)
    throw ImaginaryLeakError(
        "adjoint: coefficients flagged real-symmetric but back-projection has "
        "imaginary part " +
        std::to_string(max_imag) + " vs sup norm " + std::to_string(max_abs));
  return {std::move(grid), std::move(out)};
}

GriddedFunction apply_projection(const MeasurementMatrix& m,
                                 const GriddedFunction& g) {
  if (!g.grid || g.grid->L() != m.grid()->L())
    throw DomainMismatchError("apply_projection: grid mismatch");
  if (g.values.size() != m.grid()->size())
    throw DomainMismatchError("apply_projection: value length mismatch");
  Eigen::VectorXd out = m.kernel().selfadjointView<Eigen::Lower>() * g.values;
  return {g.grid, std::move(out)};
}

GriddedFunction to_gridded(const DiracSignal& signal) {
  signal.validate();
  GriddedFunction g = GriddedFunction::zero(signal.grid);
  for (int m = 0; m < signal.size(); ++m)
    g.values[signal.support[m]] += signal.amplitudes[m];
  return g;
}

}  // namespace spheresr
