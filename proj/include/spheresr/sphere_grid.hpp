#pragma once

#include <Eigen/Dense>
#include <memory>
#include <span>
#include <vector>

#include "spheresr/errors.hpp"

namespace spheresr {

/// Point on the unit sphere, parametrized as (phi, theta) with
/// phi in [0, 2*pi) (azimuth) and theta in [0, pi] (polar angle).
struct SpherePoint {
  double phi = 0.0;
  double theta = 0.0;

  Eigen::Vector3d unit_vector() const {
    const double st = std::sin(theta);
    return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
  }
};

/// Great-circle angle between two points, in [0, pi].  The dot product is
/// clamped to [-1, 1] so near-identical points cannot produce NaN.
double geodesic_distance(const SpherePoint& a, const SpherePoint& b);

/// The uniform target grid {(2*pi*q/L, pi*p/L) : q, p in {0,...,L-1}}.
/// All L copies of the north pole (p = 0) collapse to the single stored
/// point with index 0, so stored points are pairwise distinct and the
/// stored count is L*(L-1) + 1.
class SphereGrid {
 public:
  explicit SphereGrid(int L);

  int L() const { return L_; }
  int size() const { return static_cast<int>(points_.size()); }
  const SpherePoint& point(int index) const { return points_[index]; }
  const std::vector<SpherePoint>& points() const { return points_; }

  /// Stored index for lattice coordinates (q, p); total on {0,...,L-1}^2.
  /// Every q maps to the same index at p = 0.
  int index_of(int q, int p) const;

  /// Canonical lattice coordinates of a stored point (the pole reports (0,0)).
  std::pair<int, int> lattice_of(int index) const;

  /// Unit vectors of all stored points as rows of a size x 3 matrix.
  const Eigen::Matrix<double, Eigen::Dynamic, 3>& unit_vectors() const {
    return units_;
  }

  /// Index of the stored point closest to x (smallest geodesic distance,
  /// lowest index on ties).
  int nearest_index(const SpherePoint& x) const;

 private:
  int L_;
  std::vector<SpherePoint> points_;
  Eigen::Matrix<double, Eigen::Dynamic, 3> units_;
};

/// Builds the uniform grid for parameter L >= 2.
std::shared_ptr<const SphereGrid> build_grid(int L);

/// Smallest pairwise geodesic distance; requires at least two points.
double min_separation(std::span<const SpherePoint> points);

/// True iff every pair is at distance >= nu / N.  Empty and singleton sets
/// satisfy the condition vacuously.
bool satisfies_separation(std::span<const SpherePoint> points, double nu, int N);

/// Parameters of the Rayleigh-regularity class R(mu, r; N, L).
struct RayleighParams {
  double mu = 0.0;
  int r = 1;
  int N = 1;
  int L = 1;

  void validate() const {
    if (!(mu > 0.0) || r < 1 || N < 1 || L < 1)
      throw InvalidParameterError("RayleighParams: need mu > 0, r >= 1, N >= 1, L >= 1");
  }
};

/// Checks a candidate witness: exactly params.r pairwise-disjoint cells, each
/// internally separated by at least mu / N.
bool verify_rayleigh_witness(std::span<const std::vector<SpherePoint>> partition,
                             const RayleighParams& params);

/// Diagnostic upper bound on the regularity of a point set: first-fit greedy
/// coloring of the conflict graph whose edges join pairs closer than mu / N.
/// The exact minimum is a graph coloring problem and is not computed here.
int greedy_regularity_bound(std::span<const SpherePoint> points, double mu, int N);

}  // namespace spheresr
