#pragma once

#include <stdexcept>
#include <string>

namespace wwlab {

/// Raised for malformed arguments: bad lengths, strides, dimensions, caps.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Unknown catalog name or unknown system kind.
class LookupError : public InputError {
 public:
  using InputError::InputError;
};

/// Raised when a requested parameter lies outside what the estimators support
/// (for instance seminorm order above 4).
class UnsupportedError : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace wwlab
