#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <mutex>

#include "spheresr/harmonics.hpp"
#include "spheresr/signal.hpp"
#include "spheresr/sphere_grid.hpp"

namespace spheresr {

// The measurement operator F_N (signal -> low-degree harmonic coefficients),
// its adjoint F_N*, and the projection P_N = F_N* F_N restricted to the grid,
// realized through the addition theorem as the real kernel
//   K(x, x') = sum_{n=0}^{N} (2n+1)/(4 pi) P_n(cos rho(x, x')).

/// Complex harmonic coefficients {z_{n,k} : n <= N, |k| <= n} in coeff_index
/// packing.  real_symmetric marks vectors known to satisfy
/// z_{n,-k} = conj(z_{n,k}), i.e. coefficients of a real function.
struct HarmonicCoeffs {
  int N = 0;
  Eigen::VectorXcd values;
  bool real_symmetric = false;

  static HarmonicCoeffs zero(int N) {
    return {N, Eigen::VectorXcd::Zero(coeff_count(N)), true};
  }

  std::complex<double>& at(int n, int k) { return values[coeff_index(n, k)]; }
  const std::complex<double>& at(int n, int k) const {
    return values[coeff_index(n, k)];
  }

  /// Whether the stored values actually satisfy the real-symmetry relation.
  bool check_real_symmetric(double tol = 1e-12) const;
};

/// Real function sampled on the stored points of a grid.
struct GriddedFunction {
  std::shared_ptr<const SphereGrid> grid;
  Eigen::VectorXd values;

  static GriddedFunction zero(std::shared_ptr<const SphereGrid> g) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(g->size());
    return {std::move(g), std::move(v)};
  }
};

/// Dense realization of F_N on a grid: A[(n,k), j] = conj(Y_{n,k}(x_j)),
/// shape (N+1)^2 x G, plus the lazily assembled projection kernel K (G x G,
/// real symmetric PSD).  Immutable after construction; kernel() may be called
/// concurrently.
class MeasurementMatrix {
 public:
  MeasurementMatrix(std::shared_ptr<const SphereGrid> grid, int N);

  int N() const { return N_; }
  const std::shared_ptr<const SphereGrid>& grid() const { return grid_; }
  const Eigen::MatrixXcd& A() const { return A_; }

  /// The projection kernel K = real(A^H A), built from the addition theorem
  /// on first use.
  const Eigen::MatrixXd& kernel() const;

  /// Real orthonormal-basis samples B ((N+1)^2 x G) with B^T B = K: row
  /// (n, 0) is Y_{n,0}, rows (n, +-k) are sqrt(2) Re / Im of Y_{n,k}.  The
  /// solver applies the projection through this thin factor; at G ~ 2500 a
  /// B^T(Bx) pass moves an order of magnitude less memory than a K x pass.
  const Eigen::MatrixXd& real_basis() const;

 private:
  std::shared_ptr<const SphereGrid> grid_;
  int N_;
  Eigen::MatrixXcd A_;
  mutable Eigen::MatrixXd K_;
  mutable std::once_flag kernel_once_;
  mutable Eigen::MatrixXd B_;
  mutable std::once_flag basis_once_;
};

/// Kernel value as a function of cos(rho) alone:
/// sum_{n<=N} (2n+1)/(4 pi) P_n(c).  At c = 1 this telescopes to (N+1)^2/(4 pi).
double kernel_value(int N, double cos_rho);

/// Builds the operator with the kernel populated.
std::shared_ptr<const MeasurementMatrix> projection_kernel(
    std::shared_ptr<const SphereGrid> grid, int N);

/// F_N applied to a Dirac stream: y_{n,k} = sum_m c_m conj(Y_{n,k}(x_m)).
/// The result of measuring a real signal is flagged real_symmetric.
HarmonicCoeffs forward(const DiracSignal& signal, int N);

/// F_N* applied to coefficients: evaluates sum z_{n,k} Y_{n,k} at every grid
/// point and returns the real part.  If the input is flagged real_symmetric
/// but the evaluation leaks imaginary mass above 1e-8 of the result's sup
/// norm, an ImaginaryLeakError is raised.
GriddedFunction adjoint(const HarmonicCoeffs& coeffs,
                        std::shared_ptr<const SphereGrid> grid);

/// P_N g = K g on the grid.
GriddedFunction apply_projection(const MeasurementMatrix& m,
                                 const GriddedFunction& g);

/// The Dirac stream as a dense vector over grid points.
GriddedFunction to_gridded(const DiracSignal& signal);

}  // namespace spheresr
