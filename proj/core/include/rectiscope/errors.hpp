#pragma once

#include <stdexcept>
#include <string>

namespace rectiscope {

/// Malformed or out-of-contract user input (bad file, bad flag value, bad parameters).
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A cube was requested below the depth a MassTree was built to.
class DepthError : public InputError {
 public:
  explicit DepthError(const std::string& what) : InputError(what) {}
};

/// The L^p exponent lies outside the admissible range for the plane dimension.
class RangeError : public InputError {
 public:
  explicit RangeError(const std::string& what) : InputError(what) {}
};

/// A property that holds by construction failed; always an implementation bug.
class InvariantViolation : public std::logic_error {
 public:
  explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace rectiscope
