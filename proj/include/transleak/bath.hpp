#pragma once

#include <complex>
#include <vector>

namespace transleak {

// Ohmic bath with Drude-squared cutoff, all rates/frequencies in units of
// ω01 and ħ = 1:
//
//   J(ω)  = κ ω / (1 + ω²/ω_c²)²,  odd in ω
//   S(ω)  = 2 J(ω) / (1 - e^{-βω}),  S(0) = 2κ/β
//   C(t)  = ∫₀^∞ dω/2π J(ω) [coth(βω/2) cos(ωt) - i sin(ωt)]
//
// Note the normalization split that the two J(ω) conventions in the source
// material force: S(ω) above carries the factor 2, while the golden-rule
// weight that enters the master-equation generators is S(ω)/2 (see
// rate_spectrum); only that combination makes κ the two-level spontaneous
// emission rate and κ_T the relaxation rate.
struct BathSpec {
  double kappa = 0.2;           // coupling rate / ω01
  double beta_hbar_omega01 = 5.0;  // βħω01
  double cutoff = 50.0;         // ω_c / ω01

  void validate() const;
};

double spectral_density(const BathSpec& spec, double omega);

double fluctuation_spectrum(const BathSpec& spec, double omega);

// Golden-rule weight J(ω)/(1 - e^{-βω}) = S(ω)/2; downward transitions take
// rate_spectrum(+gap), upward rate_spectrum(-gap), dephasing rate_spectrum(0) = κ/β.
double rate_spectrum(const BathSpec& spec, double omega);

// J(|ω|) coth(β|ω|/2): even spectrum of the real noise channel, 2κ/β at 0.
double symmetrized_spectrum(const BathSpec& spec, double omega);

// κ_T = κ coth(βħω01/2).
double weak_coupling_decay_rate(const BathSpec& spec);

// Re C(t) and Im C(t) by adaptive quadrature (relative tolerance 1e-8 with an
// absolute floor at 1e-10 of the t=0 scale).
double correlation_re(const BathSpec& spec, double t);
double correlation_im(const BathSpec& spec, double t);

// Im C(t) = -(κ ω_c³ t / 8) e^{-ω_c t}, the exact transform for this J;
// serves as the large-table path and as an independent oracle in tests.
double correlation_im_closed_form(const BathSpec& spec, double t);

struct CorrelationTable {
  double dt = 0.0;
  std::vector<double> re_c;
  std::vector<double> im_c;

  std::size_t length() const { return re_c.size(); }
  std::complex<double> value(std::size_t k) const { return {re_c[k], im_c[k]}; }
};

// Table of C(k·dt) for k = 0..floor(t_max/dt). Small tables evaluate every
// point with the adaptive rule; large tables (≥ 4096 points) switch Re C to a
// spectral FFT evaluation of the same integral (spot-validated against the
// adaptive rule) and Im C to the closed form. Requires dt < π/ω_c.
CorrelationTable correlation_function(const BathSpec& spec, double t_max, double dt);

}  // namespace transleak
