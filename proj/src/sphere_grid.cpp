#include "spheresr/sphere_grid.hpp"

#include <algorithm>
#include <cmath>

namespace spheresr {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

double geodesic_distance(const SpherePoint& a, const SpherePoint& b) {
  double dot = a.unit_vector().dot(b.unit_vector());
  dot = std::clamp(dot, -1.0, 1.0);
  return std::acos(dot);
}

SphereGrid::SphereGrid(int L) : L_(L) {
  if (L < 2) throw InvalidParameterError("SphereGrid: L must be >= 2");
  points_.reserve(static_cast<std::size_t>(L) * (L - 1) + 1);
  points_.push_back({0.0, 0.0});  // the collapsed north-pole row
  for (int p = 1; p < L; ++p)
    for (int q = 0; q < L; ++q)
      points_.push_back({2.0 * kPi * q / L, kPi * p / L});
  units_.resize(size(), 3);
  for (int i = 0; i < size(); ++i) units_.row(i) = points_[i].unit_vector();
}

int SphereGrid::index_of(int q, int p) const {
  if (q < 0 || q >= L_ || p < 0 || p >= L_)
    throw InvalidParameterError("SphereGrid::index_of: (q, p) outside {0,...,L-1}^2");
  if (p == 0) return 0;
  return 1 + (p - 1) * L_ + q;
}

std::pair<int, int> SphereGrid::lattice_of(int index) const {
  if (index < 0 || index >= size())
    throw InvalidParameterError("SphereGrid::lattice_of: index out of range");
  if (index == 0) return {0, 0};
  return {(index - 1) % L_, 1 + (index - 1) / L_};
}

int SphereGrid::nearest_index(const SpherePoint& x) const {
  const Eigen::Vector3d u = x.unit_vector();
  Eigen::Index best = 0;
  (units_ * u).maxCoeff(&best);  // max dot product = min geodesic distance
  return static_cast<int>(best);
}

std::shared_ptr<const SphereGrid> build_grid(int L) {
  return std::make_shared<const SphereGrid>(L);
}

double min_separation(std::span<const SpherePoint> points) {
  if (points.size() < 2)
    throw InvalidParameterError("min_separation: needs at least two points");
  double best = kPi;
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      best = std::min(best, geodesic_distance(points[i], points[j]));
  return best;
}

bool satisfies_separation(std::span<const SpherePoint> points, double nu, int N) {
  if (!(nu > 0.0) || N < 1)
    throw InvalidParameterError("satisfies_separation: need nu > 0 and N >= 1");
  if (points.size() < 2) return true;
  return min_separation(points) >= nu / N;
}

bool verify_rayleigh_witness(std::span<const std::vector<SpherePoint>> partition,
                             const RayleighParams& params) {
  params.validate();
  if (static_cast<int>(partition.size()) != params.r) return false;
  // Pairwise disjoint: no point of one cell coincides with a point of another.
  for (std::size_t a = 0; a + 1 < partition.size(); ++a)
    for (std::size_t b = a + 1; b < partition.size(); ++b)
      for (const auto& x : partition[a])
        for (const auto& y : partition[b])
          if (geodesic_distance(x, y) < 1e-15) return false;
  for (const auto& cell : partition)
    if (!satisfies_separation(cell, params.mu, params.N)) return false;
  return true;
}

int greedy_regularity_bound(std::span<const SpherePoint> points, double mu, int N) {
  if (!(mu > 0.0) || N < 1)
    throw InvalidParameterError("greedy_regularity_bound: need mu > 0 and N >= 1");
  const double limit = mu / N;
  std::vector<std::vector<SpherePoint>> cells;
  for (const auto& x : points) {
    bool placed = false;
    for (auto& cell : cells) {
      bool fits = true;
      for (const auto& y : cell)
        if (geodesic_distance(x, y) < limit) {
          fits = false;
          break;
        }
      if (fits) {
        cell.push_back(x);
        placed = true;
        break;
      }
    }
    if (!placed) cells.push_back({x});
  }
  return static_cast<int>(cells.size());
}

}  // namespace spheresr
