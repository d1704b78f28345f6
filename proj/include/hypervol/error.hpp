#pragma once

#include <stdexcept>
#include <string>

namespace hypervol {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input does not satisfy an operation's preconditions.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Geometric input is not in general position within tolerance.
class DegenerateInput : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// An exponential search or enumeration hit its configured size limit.
class GuardExceeded : public Error {
 public:
  using Error::Error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

}  // namespace hypervol
