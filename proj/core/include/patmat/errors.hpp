#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace patmat {

/// Base of every error raised by the library. Carries the process exit code
/// the command line tool maps it to.
class Error : public std::runtime_error {
public:
  Error(const std::string& what, int exit_code)
      : std::runtime_error(what), exit_code_(exit_code) {}

  int exit_code() const noexcept { return exit_code_; }

private:
  int exit_code_;
};

/// Malformed input or a violated precondition.
class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& what) : Error(what, 1) {}
};

/// A configured size cap (word length, enumeration count, grid cells) was hit.
class BudgetError : public Error {
public:
  explicit BudgetError(const std::string& what) : Error(what, 2) {}
};

/// Numerical routine failed (eigensolver did not converge, non-finite result).
class NumericalError : public Error {
public:
  explicit NumericalError(const std::string& what) : Error(what, 3) {}
};

/// JSON or PGM syntax problem, located by 1-based line and column.
class PatternSyntaxError : public ValidationError {
public:
  PatternSyntaxError(const std::string& what, std::size_t line, std::size_t column);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace patmat
