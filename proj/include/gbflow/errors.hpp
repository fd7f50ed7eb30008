#pragma once

#include <stdexcept>
#include <string>

namespace gbflow {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad user input: unknown model kind, invalid grid size, malformed config.
struct ConfigError : Error {
  using Error::Error;
};

// Degenerate polygon, repeated vertices, non-simple curve at construction.
struct GeometryError : Error {
  using Error::Error;
};

// Non-finite state detected while time stepping.
struct DivergenceError : Error {
  DivergenceError(const std::string& what, std::size_t step, double time)
      : Error(what), step(step), time(time) {}
  std::size_t step = 0;
  double time = 0.0;
};

// Pivot collapse in a linear solve.
struct SingularSystemError : Error {
  using Error::Error;
};

// Kernel evaluated outside its domain (t >= t0, t outside schedule, ...).
struct DomainError : Error {
  using Error::Error;
};

// Diagnostics asked of a trajectory that cannot support them.
struct DiagnosticError : Error {
  using Error::Error;
};

// Nonpositive data handed to a log-linear fit, or too few points.
struct FitError : Error {
  using Error::Error;
};

// Filesystem-level failure (missing run directory, unreadable CSV).
struct IoError : Error {
  using Error::Error;
};

}  // namespace gbflow
