#pragma once

#include <stdexcept>
#include <string>

namespace ergodic_spectra {

/// Operand shapes (depth, width, factor index) do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A system configuration or experiment parameter is malformed or rejected.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical guarantee the configuration promises did not hold.
class NumericalContractError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ergodic_spectra
