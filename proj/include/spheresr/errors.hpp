#pragma once

#include <stdexcept>
#include <string>

namespace spheresr {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A parameter violates its documented domain (e.g. L < 2, k > n, |x| > 1).
struct InvalidParameterError : Error {
  using Error::Error;
};

/// Two objects that must share a grid or shape do not.
struct DomainMismatchError : Error {
  using Error::Error;
};

/// Support generation could not place the requested points at the requested
/// separation (packing bound exceeded or rejection budget exhausted).
struct InfeasibleDensityError : Error {
  using Error::Error;
};

/// A nominally real quantity came back with a non-negligible imaginary part.
struct ImaginaryLeakError : Error {
  using Error::Error;
};

/// The solver could not run (bad inputs, power iteration stalled).
struct SolverError : Error {
  using Error::Error;
};

}  // namespace spheresr
