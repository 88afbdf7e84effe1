#pragma once

#include <stdexcept>
#include <string>

namespace optomech {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed to meet its tolerance (truncation, quadrature,
/// integration blow-up, trace drift).
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace optomech
