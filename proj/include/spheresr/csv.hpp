#pragma once

#include <memory>
#include <string>

#include "spheresr/operators.hpp"
#include "spheresr/signal.hpp"
#include "spheresr/sphere_grid.hpp"

namespace spheresr {

// CSV wire formats.  Every numeric field is written with 17 significant
// digits, which round-trips IEEE doubles exactly.

/// Shortest-faithful decimal ("%.17g").
std::string format_g17(double value);

/// Grid: header "index,q,p,phi,theta"; one row per stored point with its
/// canonical lattice coordinates (the pole reports q = 0, p = 0).
void write_grid_csv(const SphereGrid& grid, const std::string& path);

/// Coefficients: header "n,k,re,im", rows ordered by coeff_index.
void write_coeffs_csv(const HarmonicCoeffs& coeffs, const std::string& path);
HarmonicCoeffs read_coeffs_csv(const std::string& path);

/// Gridded function: header "index,value".
void write_gridded_csv(const GriddedFunction& g, const std::string& path);
GriddedFunction read_gridded_csv(const std::string& path,
                                 std::shared_ptr<const SphereGrid> grid);

/// Dirac signal: header "index,phi,theta,amplitude,cell"; cell is -1 when no
/// witness is attached.
void write_signal_csv(const DiracSignal& signal, const std::string& path);
DiracSignal read_signal_csv(const std::string& path,
                            std::shared_ptr<const SphereGrid> grid);

}  // namespace spheresr
