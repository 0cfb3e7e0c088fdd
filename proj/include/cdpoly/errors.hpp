#pragma once

#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace cdpoly {

/// Short scientific rendering of a residual for error messages.
inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

/// Shape, arity or coefficient-mode mismatch between operands.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed polynomial text. `position()` is the byte offset of the failure.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class ImproperIdealError : public std::runtime_error {
 public:
  ImproperIdealError() : std::runtime_error("not a proper ideal (Groebner basis is {1})") {}
};

/// A Gram or Hankel matrix is numerically singular or indefinite.
class DegeneracyError : public std::runtime_error {
 public:
  DegeneracyError(const std::string& what, int degree)
      : std::runtime_error(what + " (degree " + std::to_string(degree) + ")"), degree_(degree) {}

  int degree() const noexcept { return degree_; }

 private:
  int degree_;
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its documented precondition.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a verified identity turns out not to hold (structural failure).
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cdpoly
