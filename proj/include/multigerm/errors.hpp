#pragma once

#include <stdexcept>
#include <string>

namespace multigerm {

// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed textual input (jet strings, multigerm JSON, catalog file).
struct ParseError : Error {
  using Error::Error;
};

// An operation was applied to an identically-zero component.
struct DegenerateComponentError : Error {
  using Error::Error;
};

// Requested jet level exceeds the truncation order carried by the data.
struct TruncationError : Error {
  using Error::Error;
};

// Vector or multigerm shapes do not match.
struct DimensionMismatchError : Error {
  using Error::Error;
};

// A precondition on operation arguments was violated.
struct PreconditionError : Error {
  using Error::Error;
};

// An internal invariant failed; indicates a bug, not bad input.
struct InternalError : Error {
  using Error::Error;
};

}  // namespace multigerm
