#pragma once

#include "transleak/dynamics.hpp"
#include "transleak/linalg.hpp"
#include "transleak/transmon.hpp"

namespace transleak {

enum class PulseKind { cosine, simple_not, drag };

PulseKind pulse_from_string(const std::string& name);
std::string pulse_name(PulseKind p);

struct DriveSpec {
  PulseKind envelope = PulseKind::cosine;
  double amplitude = 0.01;  // Ω in units of ω01
  double carrier = 1.0;     // ω_d in units of ω01
  double t_g = 0.0;         // gate time
  double t_r = 0.0;         // ramp time (simple NOT)

  void validate() const;
};

// Quadrature envelope pair with compact support; ε(t) = ε_x cos(ω_d t) +
// ε_y sin(ω_d t) multiplies the normalized coupling operator.
struct PulseProgram {
  PulseKind kind = PulseKind::cosine;
  double carrier = 1.0;
  double window_end = 0.0;  // support is [0, window_end]
  std::function<double(double)> eps_x;
  std::function<double(double)> eps_y;

  // Drive term for the solvers: h += q̂_norm (ε_x cos ω_d t + ε_y sin ω_d t).
  DriveTerm drive_term(const TransmonModel& model) const;
};

// Plain always-on cosine drive ħΩ q̂ cos(ω_d t).
PulseProgram cosine_drive(const DriveSpec& drive);

// Three-level rotating-frame Hamiltonian after the RWA, with the analytic
// ladder element √2:
//   ħ [[0, Ω/2, 0], [Ω/2, ω01-ω_d, √2Ω/2], [0, √2Ω/2, ω02-2ω_d]]
// Throws DimensionError unless the model has exactly three levels.
CMatrix rwa_hamiltonian(const TransmonModel& model, const DriveSpec& drive);

// Ramped square pulse: up over [0,t_r] via R(t) = [cos(cos(πt/2t_r)) - cos 1]
// / [1 - cos 1], hold Ω over [t_r, t_g+t_r], down over [t_g+t_r, t_g+2t_r].
PulseProgram simple_not_envelope(const DriveSpec& drive);

// Same pulse with the hold time shortened so ∫ε_x dt = π exactly (ramp area
// compensated); this is the mode with a closed-form two-level oracle, the
// paper-literal timing above is what the figures sweep.
PulseProgram simple_not_envelope_calibrated(const DriveSpec& drive);

// Mean of R over the ramp, ∫₀^{t_r} R dt / t_r (≈ 0.489).
double ramp_mean();

// Gaussian DRAG pair on [0, t_g]:
//   ε_x = Ω A [e^{-(t-t_g/2)²/(2t_g²)} - e^{-(t_g/2)²/(2t_g²)}],
//   ε_y = -dε_x/dt / α  (analytic derivative),
// with A solved so the rotation angle ∫ε_x dt = π.
PulseProgram drag_envelope(const TransmonModel& model, const DriveSpec& drive);

// The calibrated DRAG amplitude A alone.
double drag_amplitude(const DriveSpec& drive);

// ρ̃ = U ρ U† with U = diag(e^{i k ω_d t}): rotating frame at the carrier.
CMatrix to_rotating_frame(const CMatrix& rho, double omega_d, double t);

}  // namespace transleak
