#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "transleak/bath.hpp"

namespace transleak {

// Discretized realization of the correlated pair (ξ, ν) on a uniform grid.
// Single realizations are raw material for the stochastic solvers; only
// ensemble averages are physical.
struct NoisePath {
  double dt = 0.0;
  std::vector<double> xi;
  std::vector<std::complex<double>> nu;
  std::uint64_t seed = 0;
};

// Target correlations on the grid (the binding contract):
//   <ξ(t)ξ(t')> = Re C(t-t')
//   <ξ(t)ν(t')> = i Θ(t-t') Im C(t-t')
//   <ν(t)ν(t')> = 0            (unconjugated moment)
// <ν ν*> is unconstrained; the construction below realizes the minimum-power
// choice 2|F|² forced by the two constraints.
struct NoiseContract {
  double dt = 0.0;
  std::vector<double> xixi;                 // Re C at lag k·dt
  std::vector<std::complex<double>> xinu;   // i Im C at lag k·dt (causal side)
};

NoiseContract make_noise_contract(const BathSpec& spec, std::size_t n_lags, double dt);

// Spectral/circulant synthesizer. The grid is embedded in a circle of
// M = 4·2^ceil(lg n) samples (padding factor 4 suppresses wrap-around in the
// delivered window). Circulant eigenvalues are sampled from the alias-folded
// continuum spectrum J coth (always ≥ 0, so the embedding cannot fail; the
// guard is kept per contract), ξ is shaped from a Hermitian white field u,
// and ν = F·u + iF·v with the causal filter
//   F_j = (one-sided DFT of i Im C)_{-j} / sqrt(λ_j),
// which meets the cross-target through the shared u and cancels <νν>
// identically through the independent compensation field v.
class NoiseSynthesizer {
 public:
  NoiseSynthesizer(const BathSpec& spec, std::size_t n_samples, double dt);

  // Deterministic in (seed): one stream per call site index. `negate` flips
  // the sign of the whole draw (antithetic partner; the joint law is centered
  // Gaussian, so the flipped path is equally distributed).
  NoisePath generate(std::uint64_t seed, bool negate = false) const;

  std::size_t n_samples() const { return n_samples_; }
  double dt() const { return dt_; }
  std::size_t embedding_size() const { return m_; }

 private:
  std::size_t n_samples_;
  double dt_;
  std::size_t m_ = 0;
  bool zero_ = false;
  std::vector<double> sqrt_lambda_;
  std::vector<std::complex<double>> filter_;  // F_j
};

// Spec-surface wrappers around the synthesizer.
std::vector<double> synthesize_xi(const BathSpec& spec, std::size_t n_steps,
                                  double dt, std::uint64_t seed);
NoisePath synthesize_path(const BathSpec& spec, std::size_t n_steps, double dt,
                          std::uint64_t seed);

// Ensemble-mean estimators of <ξ(a+m)ξ(a)>, <ξ(a+m)ν(a)>, <ν(a+m)ν(a)> at
// lags m = -n_neg..n_pos around anchor index a, with standard errors
// (jackknife of the mean, which reduces to the plain SE for these linear
// statistics). Requires at least 100 paths.
struct CorrelationEstimate {
  double dt = 0.0;
  int lag_min = 0;
  std::vector<std::complex<double>> xixi, xinu, nunu;
  std::vector<double> xixi_se, xinu_se, nunu_se;  // per-component (worst of re/im)

  double lag_time(std::size_t idx) const {
    return dt * (static_cast<double>(lag_min) + static_cast<double>(idx));
  }
};

CorrelationEstimate estimate_correlations(const std::vector<NoisePath>& paths,
                                          std::size_t anchor, int lag_min,
                                          int lag_max);

}  // namespace transleak
