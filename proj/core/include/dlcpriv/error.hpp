#pragma once

#include <stdexcept>
#include <string>

namespace dlcpriv {

/// Invalid parameters, schema violations, inconsistent scenario files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation that cannot be carried out for the given inputs
/// (e.g. a bound whose closed form requires a shared-scale family).
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite or otherwise broken numerical state detected at run time.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dlcpriv
