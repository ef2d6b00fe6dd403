#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "transleak/bath.hpp"
#include "transleak/linalg.hpp"
#include "transleak/noise.hpp"
#include "transleak/transmon.hpp"

namespace transleak {

enum class Method { von_neumann, lindblad, redfield, sled, sln };

Method method_from_string(const std::string& name);
std::string method_name(Method m);

// Adds the drive term to a prebuilt H(t) in place; the base H_S is already
// there. Kept as a thin callable so control-module pulses plug in directly.
using DriveTerm = std::function<void(double t, CMatrix& h)>;

struct EvolutionSpec {
  Method method = Method::lindblad;
  double t_final = 1.0;
  double dt = 0.01;
  int n_trajectories = 1;
  std::uint64_t master_seed = 1;
  int save_stride = 1;
  // Antithetic pairing: trajectories 2k/2k+1 share one noise draw with
  // opposite sign. Unbiased (centered Gaussian law) and cancels all odd
  // noise orders, which is what limits SLN at strong coupling.
  bool antithetic = true;
  double divergence_threshold = 1e6;
  double max_resample_fraction = 1e-3;

  void validate(const TransmonModel& model, const BathSpec& bath) const;
  bool stochastic() const { return method == Method::sled || method == Method::sln; }
};

struct Trajectory {
  std::vector<double> times;
  std::vector<CMatrix> states;
  Method method = Method::von_neumann;
  std::uint64_t seed = 0;
};

// Ensemble mean with per-element standard errors. stderr_elem(k)(a,b) packs
// the SE of Re ρ_ab into the real part and of Im ρ_ab into the imaginary
// part. p1 tracks Tr[P₁ρ] = ρ00+ρ11 per trajectory so leakage inherits an
// honest error bar without covariance bookkeeping.
struct EnsembleTrajectory {
  Trajectory mean;
  std::vector<CMatrix> stderr_elem;
  std::vector<double> p1_mean, p1_se;
  std::vector<std::complex<double>> trace_mean;
  std::vector<double> trace_se;
  int n_trajectories = 0;
  long resampled = 0;
};

// Static dissipative generators in the energy eigenbasis, acting on
// column-major vec(ρ). Both use the normalized coupling q̂/q01 under which
// the 0<->1 channel carries exactly the golden-rule rates.
CMatrix lindblad_generator(const TransmonModel& model, const BathSpec& bath);
CMatrix redfield_generator(const TransmonModel& model, const BathSpec& bath);

// Stationary state of d/dt vec(ρ) = (-i[H,·] + G) vec(ρ) with unit trace.
CMatrix steady_state(const TransmonModel& model, const CMatrix& generator);

// Single RK4 steps, exposed for tests. The stochastic right-hand sides take
// noise samples on the half-step grid (xi[2s], xi[2s+1], xi[2s+2]).
CMatrix rhs_von_neumann(const CMatrix& h, const CMatrix& rho);
CMatrix rhs_sled(const CMatrix& h, const RMatrix& q, const CMatrix& p,
                 double kappa, double xi, const CMatrix& rho);
CMatrix rhs_sln(const CMatrix& h, const RMatrix& q, double xi,
                std::complex<double> nu, const CMatrix& rho);

// Deterministic propagation (von_neumann / lindblad / redfield).
Trajectory evolve_deterministic(const TransmonModel& model, const BathSpec& bath,
                                const DriveTerm* drive, const CMatrix& rho0,
                                const EvolutionSpec& spec);

// Trajectory-ensemble propagation (sled / sln). Reduction is deterministic
// for any thread count: fixed 64-trajectory chunks merged in chunk order.
EnsembleTrajectory evolve_ensemble(const TransmonModel& model, const BathSpec& bath,
                                   const DriveTerm* drive, const CMatrix& rho0,
                                   const EvolutionSpec& spec, int n_threads);

// Dispatcher used by the CLI; deterministic methods come back as an
// EnsembleTrajectory with zero error bars.
EnsembleTrajectory evolve(const TransmonModel& model, const BathSpec& bath,
                          const DriveTerm* drive, const CMatrix& rho0,
                          const EvolutionSpec& spec, int n_threads);

}  // namespace transleak
