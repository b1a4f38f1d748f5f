#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace bqt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CompletenessViolation : public Error {
  using Error::Error;
};
class DimensionMismatch : public Error {
  using Error::Error;
};
class NotHermitian : public Error {
  using Error::Error;
};
class InvalidDensityMatrix : public Error {
  using Error::Error;
};
class BlochOutOfBall : public Error {
  using Error::Error;
};
class RangeError : public Error {
  using Error::Error;
};
class ConvergenceError : public Error {
  using Error::Error;
};
class QuadratureTooCoarse : public Error {
  using Error::Error;
};
class SingularBloch : public Error {
  using Error::Error;
};

/// Malformed configuration text. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Well-formed configuration with an out-of-contract value. Carries the field.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
  using Error::Error;
};

/// A module error raised while evaluating one sweep point.
class SweepPointError : public Error {
 public:
  SweepPointError(double t, double u, const std::string& what)
      : Error("at t = " + std::to_string(t) + ", u = " + std::to_string(u) + ": " + what), t_(t), u_(u) {}
  double t() const noexcept { return t_; }
  double u() const noexcept { return u_; }

 private:
  double t_;
  double u_;
};

}  // namespace bqt
