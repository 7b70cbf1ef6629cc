#pragma once

#include <stdexcept>
#include <string>

namespace qrlab {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-supplied argument or configuration is invalid.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A point, ball, or stencil leaves the mapping's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// An evaluation was requested too close to a declared singular point.
class SingularPointError : public Error {
 public:
  using Error::Error;
};

// A mapping produced a non-finite value.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace qrlab
