// transleak — dissipative dynamics and control of an N-level transmon.
//
//   transleak run <scenario.toml> [--threads N] [--seed S] [--out DIR]
//   transleak noise-check [--kappa K --beta B --cutoff W ...]
//
// Exit codes: 0 ok, 1 physics/tolerance failure, 2 configuration error.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>

#include "transleak/errors.hpp"
#include "transleak/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"transleak: transmon state-leakage simulations"};
  app.set_version_flag("--version", std::string("transleak ") + transleak::kVersion);
  app.require_subcommand(1);

  std::string scenario_path;
  int threads = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out_dir;

  CLI::App* run = app.add_subcommand("run", "run a scenario file");
  run->add_option("scenario", scenario_path, "scenario TOML path")->required();
  run->add_option("--threads", threads, "worker threads (default: all cores)");
  run->add_option("--seed", seed, "override the master seed")
      ->each([&](const std::string&) { seed_set = true; });
  run->add_option("--out", out_dir, "output directory (default: $TRANSLEAK_OUT or ./out)");

  transleak::NoiseCheckConfig nc;
  CLI::App* check = app.add_subcommand("noise-check",
                                       "verify the synthesized noise correlations");
  check->add_option("--kappa", nc.bath.kappa, "coupling rate / omega01");
  check->add_option("--beta", nc.bath.beta_hbar_omega01, "beta hbar omega01");
  check->add_option("--cutoff", nc.bath.cutoff, "cutoff / omega01");
  check->add_option("--paths", nc.n_paths, "ensemble size");
  check->add_option("--dt", nc.dt, "grid step");
  check->add_option("--tmax", nc.t_max, "correlation window");
  check->add_option("--seed", nc.seed, "master seed");
  check->add_option("--threads", nc.threads, "worker threads");
  check->add_option("--out", nc.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      transleak::RunOptions options;
      options.threads = threads;
      if (seed_set) options.seed_override = seed;
      if (!out_dir.empty()) options.out_override = out_dir;
      transleak::run_scenario(scenario_path, options);
    } else {
      transleak::run_noise_check(nc);
    }
  } catch (const transleak::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
