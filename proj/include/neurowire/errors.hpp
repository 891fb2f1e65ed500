#pragma once

#include <stdexcept>
#include <string>

namespace neurowire {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (t <= 0, D <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A quadrature refinement did not settle within its tolerance.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver ran out of iterations.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double contraction_estimate)
      : Error(what), contraction_estimate_(contraction_estimate) {}

  double contraction_estimate() const { return contraction_estimate_; }

 private:
  double contraction_estimate_;
};

/// Malformed or inconsistent caller input.
class InputError : public Error {
 public:
  using Error::Error;
};

/// An operation was called on an object in a state it does not accept.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Non-finite values appeared during time stepping.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Syntax error in a configuration document.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what), line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Semantic violation in a configuration; `field()` is the offending JSON path.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& field, const std::string& what)
      : Error(field + ": " + what), field_(field) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace neurowire
