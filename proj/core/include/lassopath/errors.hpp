#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace lassopath {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched sizes, indices out of range, non-finite entries.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of an operation (e.g. t <= 0 where t > 0 is required).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver ran out of iterations. Carries the best iterate seen.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, Eigen::VectorXd best, double residual)
      : Error(what), best_(std::move(best)), residual_(residual) {}

  const Eigen::VectorXd& best_iterate() const noexcept { return best_; }
  double residual() const noexcept { return residual_; }

 private:
  Eigen::VectorXd best_;
  double residual_;
};

/// The direction solver could not produce a certified element of D.
class DirectionError : public Error {
 public:
  using Error::Error;
};

/// The looping homotopy would have to enumerate more than 2^cap candidate sets.
class LoopCapExceeded : public Error {
 public:
  LoopCapExceeded(const std::string& what, double t, std::size_t free_count)
      : Error(what), t_(t), free_count_(free_count) {}

  double t() const noexcept { return t_; }
  std::size_t undecided_count() const noexcept { return free_count_; }

 private:
  double t_;
  std::size_t free_count_;
};

/// Malformed input text. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(format(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line, std::size_t column) {
    if (line == 0) return what;
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

/// A serialized path is structurally invalid or belongs to a different instance.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace lassopath
