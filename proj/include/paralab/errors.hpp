#pragma once

#include <stdexcept>
#include <string>

namespace paralab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad arguments, malformed lattices, unknown tags.
struct InvalidArgument : Error {
  using Error::Error;
};

struct LatticeMismatch : Error {
  using Error::Error;
};

// Fixed points that do not converge, positivity loss, domain errors.
struct NumericalFailure : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace paralab
