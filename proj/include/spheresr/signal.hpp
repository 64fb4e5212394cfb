#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "spheresr/errors.hpp"
#include "spheresr/sphere_grid.hpp"

namespace spheresr {

/// Sparse positive stream of Diracs supported on grid points: a list of
/// distinct grid indices with strictly positive amplitudes.  The optional
/// witness partitions the support into r disjoint cells certifying Rayleigh
/// regularity of the generation parameters.
struct DiracSignal {
  std::shared_ptr<const SphereGrid> grid;
  std::vector<int> support;
  Eigen::VectorXd amplitudes;
  std::vector<std::vector<int>> witness;  // empty = no witness attached

  int size() const { return static_cast<int>(support.size()); }

  void validate() const {
    if (!grid) throw InvalidParameterError("DiracSignal: missing grid");
    if (amplitudes.size() != static_cast<Eigen::Index>(support.size()))
      throw InvalidParameterError("DiracSignal: support/amplitude length mismatch");
    for (int idx : support)
      if (idx < 0 || idx >= grid->size())
        throw DomainMismatchError("DiracSignal: support index outside grid");
    for (Eigen::Index i = 0; i < amplitudes.size(); ++i)
      if (!(amplitudes[i] > 0.0))
        throw InvalidParameterError("DiracSignal: amplitudes must be > 0");
    std::vector<int> sorted(support);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InvalidParameterError("DiracSignal: duplicate support index");
  }

  std::vector<SpherePoint> support_points() const {
    std::vector<SpherePoint> pts;
    pts.reserve(support.size());
    for (int idx : support) pts.push_back(grid->point(idx));
    return pts;
  }

  /// Witness cells as point sets, for verify_rayleigh_witness.
  std::vector<std::vector<SpherePoint>> witness_points() const {
    std::vector<std::vector<SpherePoint>> cells;
    cells.reserve(witness.size());
    for (const auto& cell : witness) {
      std::vector<SpherePoint> pts;
      pts.reserve(cell.size());
      for (int idx : cell) pts.push_back(grid->point(idx));
      cells.push_back(std::move(pts));
    }
    return cells;
  }
};

}  // namespace spheresr
