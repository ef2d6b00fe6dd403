#pragma once

#include <array>
#include <string>
#include <vector>

#include "transleak/dynamics.hpp"
#include "transleak/linalg.hpp"

namespace transleak {

// L(ρ) = 1 - Tr[P₁ρ], population outside the computational subspace,
// clamped to [0,1] at 1e-9 slack.
double state_leakage(const CMatrix& rho);

struct LeakageTrace {
  std::vector<double> times;
  std::vector<double> leakage;
  double l_max = 0.0;
  double t_max = 0.0;
};

// L(t) over a trajectory; the argmax is refined by a parabola through the
// three samples around the grid maximum.
LeakageTrace leakage_trace(const Trajectory& traj);

// Same refinement for any sampled curve (used by ensemble means).
void refine_maximum(const std::vector<double>& times, const std::vector<double>& values,
                    double* v_max, double* t_max);

// The six Pauli eigenstates embedded as N x N density matrices:
// |0>, |1>, (|0>±|1>)/√2, (|0>±i|1>)/√2.
struct CardinalState {
  std::string tag;
  CMatrix rho;
};
std::vector<CardinalState> cardinal_states(int dim);

// U_ideal for the NOT gate: σ_x on the qubit block, identity on the rest.
CMatrix ideal_not(int dim);

struct GateResult {
  double fidelity = 0.0;
  double avg_leakage = 0.0;
  double gate_duration = 0.0;
  struct PerState {
    std::string tag;
    CMatrix final_rho;
    double leakage = 0.0;
    double overlap = 0.0;
  };
  std::vector<PerState> per_state;
};

// F_g = (1/6) Σ_j Tr[U ρ_j(0) U† ρ_j(t_g)] and L̄_g = (1/6) Σ_j L[ρ_j(t_g)].
// Final states are expected in the frame the ideal gate is defined in
// (rotating frame at the carrier, end of the pulse support window).
GateResult gate_fidelity(const std::vector<CardinalState>& initial,
                         const std::vector<CMatrix>& final_states,
                         const CMatrix& u_ideal, double gate_duration);

// Thermal (Gibbs) state of the truncated model at inverse temperature β̃ and
// its leakage; the steady-state reference lines.
CMatrix gibbs_state(const TransmonModel& model, double beta_hbar_omega01);
double gibbs_leakage(const TransmonModel& model, double beta_hbar_omega01);

}  // namespace transleak
