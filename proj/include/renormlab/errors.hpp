#pragma once

#include <stdexcept>
#include <string>

namespace renormlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A point or value left the region where an operation is defined.
struct DomainError : Error {
  using Error::Error;
};

// An iterative solve (Newton, fixed-point, bisection) failed to reach its
// tolerance; the message carries the achieved residual.
struct SolverError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace renormlab
