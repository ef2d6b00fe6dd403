#include "transleak/control.hpp"

#include <cmath>

#include "transleak/errors.hpp"
#include "transleak/quadrature.hpp"

namespace transleak {

PulseKind pulse_from_string(const std::string& name) {
  if (name == "cosine") return PulseKind::cosine;
  if (name == "simple_not") return PulseKind::simple_not;
  if (name == "drag") return PulseKind::drag;
  throw ConfigError("unknown pulse '" + name + "'");
}

std::string pulse_name(PulseKind p) {
  switch (p) {
    case PulseKind::cosine: return "cosine";
    case PulseKind::simple_not: return "simple_not";
    case PulseKind::drag: return "drag";
  }
  return "?";
}

void DriveSpec::validate() const {
  if (amplitude < 0) throw ConfigError("drive: amplitude must be >= 0");
  if (envelope != PulseKind::cosine) {
    if (!(t_g > 0)) throw ConfigError("drive: t_g must be > 0");
    if (t_r < 0) throw ConfigError("drive: t_r must be >= 0");
    if (envelope == PulseKind::simple_not && t_r > 0.5 * t_g) {
      throw ConfigError("drive: simple NOT requires t_r <= t_g/2");
    }
  }
}

DriveTerm PulseProgram::drive_term(const TransmonModel& model) const {
  const RMatrix q = model.q_normalized();
  const double wd = carrier;
  auto ex = eps_x;
  auto ey = eps_y;
  return [q, wd, ex, ey](double t, CMatrix& h) {
    const double e = ex(t) * std::cos(wd * t) + ey(t) * std::sin(wd * t);
    if (e != 0.0) h += (e * q).cast<Complex>();
  };
}

PulseProgram cosine_drive(const DriveSpec& drive) {
  drive.validate();
  PulseProgram p;
  p.kind = PulseKind::cosine;
  p.carrier = drive.carrier;
  p.window_end = std::numeric_limits<double>::infinity();
  const double omega = drive.amplitude;
  p.eps_x = [omega](double) { return omega; };
  p.eps_y = [](double) { return 0.0; };
  return p;
}

CMatrix rwa_hamiltonian(const TransmonModel& model, const DriveSpec& drive) {
  if (model.dim() != 3) {
    throw DimensionError("rwa_hamiltonian: model must have N = 3");
  }
  const double omega = drive.amplitude;
  const double wd = drive.carrier;
  CMatrix h = CMatrix::Zero(3, 3);
  h(0, 1) = h(1, 0) = 0.5 * omega;
  h(1, 2) = h(2, 1) = 0.5 * std::sqrt(2.0) * omega;
  h(1, 1) = model.omega[1] - wd;
  h(2, 2) = model.omega[2] - 2.0 * wd;
  return h;
}

namespace {

double ramp_function(double t, double t_r) {
  const double c1 = std::cos(1.0);
  return (std::cos(std::cos(0.5 * M_PI * t / t_r)) - c1) / (1.0 - c1);
}

PulseProgram make_simple_not(const DriveSpec& drive, double hold) {
  PulseProgram p;
  p.kind = PulseKind::simple_not;
  p.carrier = drive.carrier;
  const double omega = drive.amplitude;
  const double t_r = drive.t_r;
  p.window_end = hold + 2.0 * t_r;
  p.eps_x = [omega, t_r, hold](double t) {
    if (t <= 0.0 || t >= hold + 2.0 * t_r) return 0.0;
    if (t_r == 0.0) return omega;
    if (t <= t_r) return omega * ramp_function(t, t_r);
    if (t < hold + t_r) return omega;
    return omega * ramp_function(t - hold + 2.0 * t_r, t_r);
  };
  p.eps_y = [](double) { return 0.0; };
  return p;
}

}  // namespace

double ramp_mean() {
  // (2/π)∫₀^{π/2} cos(cos θ) dθ = J₀(1), so the mean is (J₀(1) - cos 1)/(1 - cos 1);
  // evaluated by quadrature rather than by quoting the Bessel value.
  auto f = [](double u) { return ramp_function(u, 1.0); };
  return integrate_gk(f, 0.0, 1.0, 1e-12, 1.0, "ramp_mean");
}

PulseProgram simple_not_envelope(const DriveSpec& drive) {
  drive.validate();
  return make_simple_not(drive, drive.t_g);
}

PulseProgram simple_not_envelope_calibrated(const DriveSpec& drive) {
  drive.validate();
  if (!(drive.amplitude > 0)) throw CalibrationError("simple NOT: zero amplitude");
  const double hold = M_PI / drive.amplitude - 2.0 * drive.t_r * ramp_mean();
  if (hold < 0) {
    throw CalibrationError("simple NOT: ramps alone exceed a pi pulse area");
  }
  return make_simple_not(drive, hold);
}

double drag_amplitude(const DriveSpec& drive) {
  if (!(drive.amplitude > 0) || !(drive.t_g > 0)) {
    throw CalibrationError("drag: need positive amplitude and gate time");
  }
  const double tg = drive.t_g;
  auto gauss = [tg](double t) {
    const double u = (t - 0.5 * tg) / tg;
    return std::exp(-0.5 * u * u) - std::exp(-0.125);
  };
  const double area = integrate_gk(gauss, 0.0, tg, 1e-12, tg, "drag_amplitude");
  if (!(area > 0)) throw CalibrationError("drag: degenerate pulse area");
  return M_PI / (drive.amplitude * area);
}

PulseProgram drag_envelope(const TransmonModel& model, const DriveSpec& drive) {
  drive.validate();
  const double alpha = model.anharmonicity;
  if (!(alpha < 0)) {
    throw CalibrationError("drag: anharmonicity must be negative (transmon regime)");
  }
  const double a = drag_amplitude(drive);
  const double tg = drive.t_g;
  const double omega = drive.amplitude;

  PulseProgram p;
  p.kind = PulseKind::drag;
  p.carrier = drive.carrier;
  p.window_end = tg;
  p.eps_x = [omega, a, tg](double t) {
    if (t <= 0.0 || t >= tg) return 0.0;
    const double u = (t - 0.5 * tg) / tg;
    return omega * a * (std::exp(-0.5 * u * u) - std::exp(-0.125));
  };
  p.eps_y = [omega, a, tg, alpha](double t) {
    if (t <= 0.0 || t >= tg) return 0.0;
    const double u = (t - 0.5 * tg) / tg;
    const double deriv = -omega * a * u / tg * std::exp(-0.5 * u * u);
    return -deriv / alpha;
  };
  return p;
}

CMatrix to_rotating_frame(const CMatrix& rho, double omega_d, double t) {
  const int n = static_cast<int>(rho.rows());
  CVector phases(n);
  for (int k = 0; k < n; ++k) {
    const double a = static_cast<double>(k) * omega_d * t;
    phases(k) = Complex(std::cos(a), std::sin(a));
  }
  return phases.asDiagonal() * rho * phases.conjugate().asDiagonal();
}

}  // namespace transleak
