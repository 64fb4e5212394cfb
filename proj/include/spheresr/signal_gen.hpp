#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "spheresr/operators.hpp"
#include "spheresr/rng.hpp"
#include "spheresr/signal.hpp"

namespace spheresr {

// Random Rayleigh-regular positive signals, coefficient-domain Gaussian noise,
// and the l1 noise budget delta used by the recovery program.

/// One measured instance.  noisy = clean + noise holds exactly;
/// s = adjoint(noisy); delta = ||adjoint(noise)||_l1 over the grid (the tight
/// "oracle" budget that makes the true signal feasible).
struct Measurement {
  HarmonicCoeffs clean;
  HarmonicCoeffs noise;
  HarmonicCoeffs noisy;
  GriddedFunction s;
  double delta = 0.0;
  double snr_db = std::numeric_limits<double>::infinity();
};

/// Random support with an explicit separation constant: r disjoint cells of
/// grid indices, each cell internally separated by >= mu / N.  Cell sizes are
/// given per cell.  Sampling is uniform over grid points with rejection; each
/// cell gets a budget of 10^4 * cell_size attempts before an
/// InfeasibleDensityError reports the achieved cell sizes.  Amplitudes are
/// placeholder ones; the witness field carries the cells.
DiracSignal gen_support_cells(double mu, int N,
                              std::shared_ptr<const SphereGrid> grid,
                              const std::vector<int>& cell_sizes,
                              std::uint64_t seed);

/// Support in the Rayleigh class R(nu*r, r; N, L): every cell separated by
/// nu*r / N, points_per_cell points in each of the r cells.
DiracSignal gen_support(int r, double nu, int N,
                        std::shared_ptr<const SphereGrid> grid,
                        int points_per_cell, std::uint64_t seed);

/// Same class, but total_points distributed round-robin across the r cells.
DiracSignal gen_support_total(int r, double nu, int N,
                              std::shared_ptr<const SphereGrid> grid,
                              int total_points, std::uint64_t seed);

/// i.i.d. amplitudes uniform on (0, 10].
Eigen::VectorXd gen_amplitudes(int count, std::uint64_t seed);

/// Adds real-symmetric Gaussian noise to clean coefficients: for k = 0 the
/// real part gets standard deviation sigma; for k > 0 real and imaginary
/// parts get sigma/sqrt(2) each and eta_{n,-k} = conj(eta_{n,k}).  This keeps
/// the back-projection s real.  delta is the realized l1 norm of the
/// back-projected noise.
Measurement add_noise(const HarmonicCoeffs& clean, double sigma,
                      std::uint64_t seed,
                      std::shared_ptr<const SphereGrid> grid);

/// 20 log10(||clean|| / ||noise||) over the full complex coefficient vectors;
/// +infinity for zero noise.
double snr_db(const HarmonicCoeffs& clean, const HarmonicCoeffs& noise);

/// Noise standard deviation whose expected l2 norm hits the target SNR:
/// sigma = ||clean|| / (10^(snr/20) * (N+1)).
double calibrate_sigma(const HarmonicCoeffs& clean, double target_snr_db);

}  // namespace spheresr
