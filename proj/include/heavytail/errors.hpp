// Exception types shared across the library.  Each maps to one named error
// condition in the public API contracts; the CLI translates ConfigError to
// exit code 2 and IoError to exit code 3.
#pragma once

#include <stdexcept>
#include <string>

namespace heavytail {

// Base class so callers can catch all library errors in one handler.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A learner received a cost outside its advertised range.
struct CostOutOfRange : Error {
  using Error::Error;
};

// A parameter struct failed validation (non-positive scale, missing field,
// unknown config key, malformed config file, ...).
struct InvalidConfig : Error {
  using Error::Error;
};
using ConfigError = InvalidConfig;

// The fixed-point solver could not certify its bracket or residual.
struct SolverDiverged : Error {
  using Error::Error;
};

// A vector argument does not match the dimension the state was built with.
struct DimensionMismatch : Error {
  using Error::Error;
};

// A loss-stream spec names an unknown kind.
struct UnknownLossSpec : Error {
  using Error::Error;
};

// A noise model cannot meet the requested moment order (e.g. Pareto tail
// index <= moment power), so calibration is impossible.
struct MomentInfeasible : Error {
  using Error::Error;
};

// Filesystem failure while emitting or reading experiment outputs.
struct IoError : Error {
  using Error::Error;
};

}  // namespace heavytail
