#pragma once

#include <stdexcept>
#include <string>

namespace fpw {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violated a documented precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// The requested inversion has no physical solution (e.g. negative density).
class NoSolution : public Error {
 public:
  using Error::Error;
};

/// Fixed-point iteration failed to settle; carries the last iterate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_iterate, int iterations)
      : Error(what), last_iterate_(last_iterate), iterations_(iterations) {}

  double last_iterate() const noexcept { return last_iterate_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double last_iterate_;
  int iterations_;
};

/// Least-squares fit with fewer than two distinct abscissae.
class DegenerateFit : public Error {
 public:
  using Error::Error;
};

/// The response has no interior maximum.
class NoResonance : public Error {
 public:
  using Error::Error;
};

/// The boundary system of the resonator cascade is singular at one frequency.
class SingularBoundary : public Error {
 public:
  using Error::Error;
};

/// Malformed device configuration; line is 1-based, 0 when not tied to a line.
class ConfigError : public Error {
 public:
  ConfigError(int line, const std::string& message)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace fpw
