#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "transleak/bath.hpp"

namespace transleak {

inline constexpr const char* kVersion = "0.1.0";

struct RunOptions {
  int threads = 0;  // 0 = hardware concurrency
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> out_override;
};

// Execute a scenario TOML end to end: dispatch on the scenario name, write
// the CSV panels and manifest.json under <out>/<name>/. Partial outputs are
// removed on failure. Throws ConfigError for config problems, other
// transleak errors for physics/tolerance failures.
void run_scenario(const std::string& toml_path, const RunOptions& options);

struct NoiseCheckConfig {
  BathSpec bath;
  std::size_t n_paths = 20000;
  double dt = 0.01;
  double t_max = 10.0;
  std::uint64_t seed = 1;
  std::string out_dir;
  int threads = 0;
};

// Direct `noise-check` entry point (also reachable as a scenario).
void run_noise_check(const NoiseCheckConfig& config);

// Default output directory: $TRANSLEAK_OUT or "./out".
std::string default_output_dir();

}  // namespace transleak
