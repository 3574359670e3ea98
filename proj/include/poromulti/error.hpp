#pragma once

#include <stdexcept>
#include <string>

namespace poromulti {

/// Base for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed configuration, geometry, mesh, or state input.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Factorization, eigensolver, or nonlinear iteration failure.
class NumericalError : public Error {
public:
  using Error::Error;
};

}  // namespace poromulti
