#pragma once

#include <stdexcept>
#include <string>

namespace vixb {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments or parameters supplied by the caller.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A computation that could not produce a meaningful result
/// (degenerate regression, too many rejected paths, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace vixb
