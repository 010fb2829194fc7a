#pragma once

#include <stdexcept>
#include <string>

namespace opa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The input is well formed but outside what the numerics support
/// (e.g. a polynomial zero sitting on the unit circle).
class UnsupportedInput : public Error {
 public:
  using Error::Error;
};

/// A linear system that must be solved is singular or numerically so.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

/// Two independently computed quantities that must agree do not.
class Inconsistency : public Error {
 public:
  using Error::Error;
};

/// Syntax error in a function expression; `position` is a 0-based offset.
class ParseError : public InvalidArgument {
 public:
  ParseError(const std::string& message, std::size_t position)
      : InvalidArgument(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace opa
