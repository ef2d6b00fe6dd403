#pragma once

#include <stdexcept>
#include <string>

namespace transleak {

// Error taxonomy shared across modules. Everything derives from
// std::runtime_error so callers can catch coarsely; the CLI maps
// ConfigError to exit code 2 and the rest to exit code 1.

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmbeddingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ContractError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StepError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TrajectoryDiverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CalibrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace transleak
