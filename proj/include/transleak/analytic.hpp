#pragma once

#include "transleak/bath.hpp"
#include "transleak/linalg.hpp"

namespace transleak {

// Closed-form short-time decoherence of the three-level transmon in the
// regime where the free Hamiltonian is negligible. Works in the eigenbasis
// of the analytic coupling operator
//
//      q = [[0,1,0],[1,0,√2],[0,√2,0]],   eigenvalues (+√3, -√3, 0),
//
// where the map is elementwise:
//
//   ρ_{nm}(t) = exp{ [-(q_n - q_m)² f(t) + i (q_n² - q_m²) φ(t)] κ/(4π ω01) } ρ_{nm}(0).
//
// For the (q+, q-) pair (q_n - q_m)² = 12, which is the published exponent.

// Dimensionless decoherence kernels (κ cancels between prefactor and J):
//   f(t) = 2 ∫₀^∞ dω coth(βω/2) (1 - cos ωt) / (ω (1 + ω²/ω_c²)²)
//   φ(t) = 2 ∫₀^∞ dω (ωt - sin ωt) / (ω (1 + ω²/ω_c²)²)
double kernel_f(const BathSpec& bath, double t);
double kernel_phi(const BathSpec& bath, double t);

// Kernels precomputed at one time, so maps at several κ can share quadrature.
struct DecoherenceKernels {
  double f = 0.0;
  double phi = 0.0;
};

inline DecoherenceKernels kernels_at(const BathSpec& bath, double t) {
  return {kernel_f(bath, t), kernel_phi(bath, t)};
}

// Basis change between the energy eigenbasis and the q̂ eigenbasis.
// Columns of `to_q` are |q+⟩, |q-⟩, |q0⟩ expressed in the energy basis.
struct QutritBasisChange {
  RMatrix to_q;       // 3x3, orthogonal
  RVector q_values;   // (+√3, -√3, 0)
};

QutritBasisChange qutrit_basis_change();

// Apply the decoherence map to a 3x3 density matrix given in the energy
// eigenbasis. Throws DimensionError unless rho0 is 3x3.
CMatrix qutrit_map(const CMatrix& rho0, const DecoherenceKernels& k, double kappa);

inline CMatrix qutrit_map(const CMatrix& rho0, const BathSpec& bath, double t) {
  return qutrit_map(rho0, kernels_at(bath, t), bath.kappa);
}

// q̂-basis matrix elements of |1⟩⟨1|: diagonal q± entries 1/2, the q+q- cross
// terms -1/2, everything involving q0 zero.
CMatrix qutrit_initial_projections();

// Diagonals for ρ(0) = |1⟩⟨1| straight from the published formulas,
//   ρ00 = (1 - e^{-12 f κ/(4π)})/6,  ρ11 = (1 + e^-)/2,  ρ22 = (1 - e^-)/3.
struct QutritDiagonals {
  double p0, p1, p2;
};
QutritDiagonals short_time_diagonals(const BathSpec& bath, double t);

}  // namespace transleak
