#pragma once

#include <stdexcept>
#include <string>

namespace cogrowth {

/// Malformed input text (group spec, oracle spec, config, word).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Request outside a declared bound: radius bound, coset budget, window cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated a precondition of an API call.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation could not produce a trustworthy answer.
class DiagnosticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The constants checklist of the construction does not hold.
class ConstantsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cogrowth
