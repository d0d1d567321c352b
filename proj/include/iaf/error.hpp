#pragma once

#include <stdexcept>
#include <string>

namespace iaf {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Numerical integration produced a non-finite state or failed to advance.
class IntegrationFailure : public Error {
 public:
  using Error::Error;
};

/// A single stroboscopic step exceeded the spike guard.
class RunawayError : public Error {
 public:
  using Error::Error;
};

/// A root solve found no sign change in the admissible bracket.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// Bad configuration input (file or command line).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace iaf
