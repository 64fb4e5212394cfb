#include "spheresr/signal_gen.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

namespace spheresr {

DiracSignal gen_support_cells(double mu, int N,
                              std::shared_ptr<const SphereGrid> grid,
                              const std::vector<int>& cell_sizes,
                              std::uint64_t seed) {
  if (!grid) throw InvalidParameterError("gen_support_cells: missing grid");
  if (!(mu > 0.0) || N < 1)
    throw InvalidParameterError("gen_support_cells: need mu > 0 and N >= 1");
  if (cell_sizes.empty())
    throw InvalidParameterError("gen_support_cells: need at least one cell");
  for (int size : cell_sizes)
    if (size < 1)
      throw InvalidParameterError("gen_support_cells: cell sizes must be >= 1");

  const double limit = mu / N;
  // Spherical cap packing: caps of radius limit/2 around the cell's points
  // are disjoint, so more than 4 / (limit/2)^2 points cannot fit.
  const double packing_bound = 4.0 / ((limit / 2.0) * (limit / 2.0));

  DiracSignal signal;
  signal.grid = grid;
  Rng rng(seed);
  std::unordered_set<int> used;

  for (std::size_t cell_id = 0; cell_id < cell_sizes.size(); ++cell_id) {
    const int want = cell_sizes[cell_id];
    if (static_cast<double>(want) > packing_bound) {
      std::ostringstream msg;
      msg << "gen_support_cells: cell " << cell_id << " wants " << want
          << " points but the packing bound at separation " << limit << " is "
          << packing_bound;
      throw InfeasibleDensityError(msg.str());
    }
    std::vector<int> cell;
    long budget = 10000L * want;
    while (static_cast<int>(cell.size()) < want && budget > 0) {
      --budget;
      const int idx = static_cast<int>(rng.uniform_below(grid->size()));
      if (used.count(idx)) continue;
      const SpherePoint& cand = grid->point(idx);
      bool ok = true;
      for (int other : cell)
        if (geodesic_distance(cand, grid->point(other)) < limit) {
          ok = false;
          break;
        }
      if (!ok) continue;
      cell.push_back(idx);
      used.insert(idx);
    }
    if (static_cast<int>(cell.size()) < want) {
      std::ostringstream msg;
      msg << "gen_support_cells: rejection budget exhausted; achieved sizes";
      for (const auto& done : signal.witness) msg << " " << done.size();
      msg << " " << cell.size() << " of";
      for (int size : cell_sizes) msg << " " << size;
      throw InfeasibleDensityError(msg.str());
    }
    signal.support.insert(signal.support.end(), cell.begin(), cell.end());
    signal.witness.push_back(std::move(cell));
  }

  signal.amplitudes = Eigen::VectorXd::Ones(signal.support.size());
  signal.validate();
  return signal;
}

DiracSignal gen_support(int r, double nu, int N,
                        std::shared_ptr<const SphereGrid> grid,
                        int points_per_cell, std::uint64_t seed) {
  if (r < 1) throw InvalidParameterError("gen_support: r must be >= 1");
  if (points_per_cell < 1)
    throw InvalidParameterError("gen_support: points_per_cell must be >= 1");
  std::vector<int> sizes(r, points_per_cell);
  return gen_support_cells(nu * r, N, std::move(grid), sizes, seed);
}

DiracSignal gen_support_total(int r, double nu, int N,
                              std::shared_ptr<const SphereGrid> grid,
                              int total_points, std::uint64_t seed) {
  if (r < 1) throw InvalidParameterError("gen_support_total: r must be >= 1");
  if (total_points < r)
    throw InvalidParameterError("gen_support_total: need at least r points");
  std::vector<int> sizes(r, total_points / r);
  for (int i = 0; i < total_points % r; ++i) ++sizes[i];
  return gen_support_cells(nu * r, N, std::move(grid), sizes, seed);
}

Eigen::VectorXd gen_amplitudes(int count, std::uint64_t seed) {
  if (count < 0) throw InvalidParameterError("gen_amplitudes: count must be >= 0");
  Rng rng(seed);
  Eigen::VectorXd amps(count);
  for (int i = 0; i < count; ++i) amps[i] = rng.uniform_positive(10.0);
  return amps;
}

Measurement add_noise(const HarmonicCoeffs& clean, double sigma,
                      std::uint64_t seed,
                      std::shared_ptr<const SphereGrid> grid) {
  if (!(sigma >= 0.0)) throw InvalidParameterError("add_noise: sigma must be >= 0");
  if (!clean.real_symmetric || !clean.check_real_symmetric())
    throw InvalidParameterError("add_noise: clean coefficients must be real-symmetric");

  const int N = clean.N;
  HarmonicCoeffs noise = HarmonicCoeffs::zero(N);
  if (sigma > 0.0) {
    Rng rng(seed);
    const double comp_sd = sigma / std::sqrt(2.0);
    // Fixed draw order: n ascending, k ascending, real before imaginary.
    for (int n = 0; n <= N; ++n) {
      noise.at(n, 0) = {sigma * rng.gaussian(), 0.0};
      for (int k = 1; k <= n; ++k) {
        const double re = comp_sd * rng.gaussian();
        const double im = comp_sd * rng.gaussian();
        noise.at(n, k) = {re, im};
        noise.at(n, -k) = {re, -im};
      }
    }
  }

  Measurement m;
  m.clean = clean;
  m.noise = noise;
  m.noisy = {N, clean.values + noise.values, true};
  m.s = adjoint(m.noisy, grid);
  m.delta = sigma > 0.0 ? adjoint(noise, std::move(grid)).values.lpNorm<1>() : 0.0;
  m.snr_db = snr_db(clean, noise);
  return m;
}

double snr_db(const HarmonicCoeffs& clean, const HarmonicCoeffs& noise) {
  if (clean.N != noise.N)
    throw InvalidParameterError("snr_db: coefficient vectors differ in N");
  const double nn = noise.values.norm();
  if (nn == 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(clean.values.norm() / nn);
}

double calibrate_sigma(const HarmonicCoeffs& clean, double target_snr_db) {
  const double cn = clean.values.norm();
  if (cn == 0.0)
    throw InvalidParameterError("calibrate_sigma: clean coefficients are zero");
  if (std::isinf(target_snr_db) && target_snr_db > 0.0) return 0.0;
  return cn / (std::pow(10.0, target_snr_db / 20.0) * (clean.N + 1));
}

}  // namespace spheresr
