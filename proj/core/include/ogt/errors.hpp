#pragma once

#include <stdexcept>
#include <string>

namespace ogt {

/// Base class for every error raised by the library. The CLI maps all of
/// these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidGraphError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidObjectiveError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. Carries the offending line (1-based, 0 if unknown).
class ParseError : public Error {
 public:
  ParseError(const std::string& where, std::size_t line, const std::string& what)
      : Error(where + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A non-finite entry appeared in an iterate.
class DivergenceError : public Error {
 public:
  DivergenceError(long iteration, const std::string& what)
      : Error("diverged at iteration " + std::to_string(iteration) + ": " + what),
        iteration_(iteration) {}

  long iteration() const noexcept { return iteration_; }

 private:
  long iteration_;
};

/// A runtime invariant check exceeded its threshold.
class DiagnosticError : public Error {
 public:
  DiagnosticError(long iteration, const std::string& check, double residual)
      : Error("diagnostic '" + check + "' failed at iteration " + std::to_string(iteration) +
              " (residual " + std::to_string(residual) + ")"),
        iteration_(iteration),
        residual_(residual) {}

  long iteration() const noexcept { return iteration_; }
  double residual() const noexcept { return residual_; }

 private:
  long iteration_;
  double residual_;
};

}  // namespace ogt
