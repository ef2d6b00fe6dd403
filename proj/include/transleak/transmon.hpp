#pragma once

#include "transleak/linalg.hpp"

namespace transleak {

// Charge-basis transmon input. Energies are measured in units of E_C
// (only the ratio E_J/E_C enters), frequencies of the truncated model are
// reported in units of the lowest transition ω01.
struct TransmonSpec {
  double ej_over_ec = 100.0;
  double n_g = 0.0;
  int n_levels = 5;
  int charge_cutoff = 15;

  void validate() const;
};

// Truncated N-level model in the energy eigenbasis, ħ = 1.
//
// omega[k] are eigenfrequencies with omega[0] = 0, in units of ω01 (so
// omega[1] = 1 exactly). q_op holds the raw charge matrix elements
// ⟨k|n̂|l⟩ with the gauge fixed so q_{k,k+1} > 0. Immutable after build.
struct TransmonModel {
  RVector omega;          // normalized, omega[0] = 0, omega[1] = 1
  RMatrix q_op;           // raw ⟨k|n̂|l⟩, real symmetric
  double omega01 = 1.0;   // normalized lowest gap (= 1 by construction)
  double omega01_ec = 0;  // lowest gap in units of E_C
  double anharmonicity = 0;  // (ω12 - ω01)/ω01, negative in the transmon regime

  int dim() const { return static_cast<int>(omega.size()); }

  // System Hamiltonian diag(ω_k) in ω01 units.
  CMatrix hamiltonian() const;

  // Coupling operator rescaled so the 0<->1 matrix element is 1. This is the
  // normalization under which κ is the two-level spontaneous-emission rate;
  // all solvers and drives use it.
  RMatrix q_normalized() const { return q_op / q_op(0, 1); }
};

// Charge-basis Hamiltonian in units of E_C: diagonal 4(n - n_g)^2 for
// n = -N_c..N_c, off-diagonal -E_J/(2E_C) between adjacent charge states.
RMatrix build_charge_hamiltonian(const TransmonSpec& spec);

// Diagonalize, truncate to the N lowest levels, project n̂, fix the gauge.
// Throws ConvergenceError when charge_cutoff+5 moves any kept eigenfrequency
// by more than 1e-9 relative.
TransmonModel diagonalize_and_truncate(const TransmonSpec& spec);

// p̂ = (i/ω01)[H_S, q̂] on the truncated space: p_{nm} = i(ω_n - ω_m) q_{nm}
// in normalized units. Hermitian, zero diagonal.
CMatrix conjugate_operator(const TransmonModel& model);

}  // namespace transleak
