#pragma once

#include <stdexcept>
#include <string>

namespace cspd {

// Error taxonomy. Everything derives from std::runtime_error or
// std::invalid_argument so callers can catch broadly.

struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RepresentationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct GridMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct FitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyCellError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MemoryGuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Non-finite values appeared during a Runge-Kutta stage.
struct DivergenceError : std::runtime_error {
  DivergenceError(int stage, double t)
      : std::runtime_error("non-finite values after RK stage " + std::to_string(stage) +
                           " at t = " + std::to_string(t)),
        stage(stage),
        time(t) {}
  int stage;
  double time;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cspd
