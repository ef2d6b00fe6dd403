#include "transleak/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "transleak/errors.hpp"

namespace transleak {

double state_leakage(const CMatrix& rho) {
  if (rho.rows() < 2) throw DimensionError("state_leakage: dim must be >= 2");
  const double p1 = rho(0, 0).real() + rho(1, 1).real();
  double l = 1.0 - p1;
  if (l < 0.0 && l > -1e-9) l = 0.0;
  if (l > 1.0 && l < 1.0 + 1e-9) l = 1.0;
  return l;
}

void refine_maximum(const std::vector<double>& times, const std::vector<double>& values,
                    double* v_max, double* t_max) {
  const std::size_t n = values.size();
  std::size_t k = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (values[i] > values[k]) k = i;
  }
  double tm = times[k];
  double vm = values[k];
  if (k > 0 && k + 1 < n) {
    // Parabola through the three neighbours; degenerate curvature keeps the
    // grid point.
    const double y0 = values[k - 1], y1 = values[k], y2 = values[k + 1];
    const double denom = y0 - 2.0 * y1 + y2;
    if (denom < -1e-300) {
      const double shift = 0.5 * (y0 - y2) / denom;
      const double h_left = times[k] - times[k - 1];
      const double h_right = times[k + 1] - times[k];
      const double h = 0.5 * (h_left + h_right);
      tm = times[k] + shift * h;
      vm = y1 - 0.25 * (y0 - y2) * shift;
    }
  }
  *v_max = vm;
  *t_max = tm;
}

LeakageTrace leakage_trace(const Trajectory& traj) {
  if (traj.states.empty()) throw DimensionError("leakage_trace: empty trajectory");
  LeakageTrace out;
  out.times = traj.times;
  out.leakage.reserve(traj.states.size());
  for (const CMatrix& rho : traj.states) out.leakage.push_back(state_leakage(rho));
  refine_maximum(out.times, out.leakage, &out.l_max, &out.t_max);
  return out;
}

std::vector<CardinalState> cardinal_states(int dim) {
  if (dim < 2) throw DimensionError("cardinal_states: dim must be >= 2");
  auto from_qubit = [dim](Complex a, Complex b, const std::string& tag) {
    CVector psi = CVector::Zero(dim);
    psi(0) = a;
    psi(1) = b;
    CardinalState s;
    s.tag = tag;
    s.rho = psi * psi.adjoint();
    return s;
  };
  const double r = 1.0 / std::sqrt(2.0);
  return {
      from_qubit(1, 0, "z+"),
      from_qubit(0, 1, "z-"),
      from_qubit(r, r, "x+"),
      from_qubit(r, -r, "x-"),
      from_qubit(r, Complex(0, r), "y+"),
      from_qubit(r, Complex(0, -r), "y-"),
  };
}

CMatrix ideal_not(int dim) {
  CMatrix u = CMatrix::Identity(dim, dim);
  u(0, 0) = 0.0;
  u(1, 1) = 0.0;
  u(0, 1) = 1.0;
  u(1, 0) = 1.0;
  return u;
}

GateResult gate_fidelity(const std::vector<CardinalState>& initial,
                         const std::vector<CMatrix>& final_states,
                         const CMatrix& u_ideal, double gate_duration) {
  if (initial.size() != final_states.size() || initial.empty()) {
    throw DimensionError("gate_fidelity: state count mismatch");
  }
  GateResult out;
  out.gate_duration = gate_duration;
  double f_sum = 0.0, l_sum = 0.0;
  for (std::size_t j = 0; j < initial.size(); ++j) {
    const CMatrix target = u_ideal * initial[j].rho * u_ideal.adjoint();
    const double overlap = (target * final_states[j]).trace().real();
    const double leak = state_leakage(final_states[j]);
    f_sum += overlap;
    l_sum += leak;
    out.per_state.push_back({initial[j].tag, final_states[j], leak, overlap});
  }
  out.fidelity = f_sum / static_cast<double>(initial.size());
  out.avg_leakage = l_sum / static_cast<double>(initial.size());
  if (out.fidelity > 1.0 && out.fidelity < 1.0 + 1e-9) out.fidelity = 1.0;
  if (out.avg_leakage < 0.0 && out.avg_leakage > -1e-9) out.avg_leakage = 0.0;
  return out;
}

CMatrix gibbs_state(const TransmonModel& model, double beta) {
  const int n = model.dim();
  CMatrix rho = CMatrix::Zero(n, n);
  double z = 0.0;
  for (int k = 0; k < n; ++k) z += std::exp(-beta * model.omega[k]);
  for (int k = 0; k < n; ++k) rho(k, k) = std::exp(-beta * model.omega[k]) / z;
  return rho;
}

double gibbs_leakage(const TransmonModel& model, double beta) {
  return state_leakage(gibbs_state(model, beta));
}

}  // namespace transleak
