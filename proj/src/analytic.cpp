#include "transleak/analytic.hpp"

#include <cmath>

#include "transleak/errors.hpp"
#include "transleak/quadrature.hpp"

namespace transleak {

namespace {

// (1 - cos ωt)/ω as 2 sin²(ωt/2)/ω: no cancellation at small ωt.
double one_minus_cos_over(double w, double t) {
  const double s = std::sin(0.5 * w * t);
  return 2.0 * s * s / w;
}

// (ωt - sin ωt)/ω, series-guarded below ωt = 1e-3.
double wt_minus_sin_over(double w, double t) {
  const double x = w * t;
  if (std::abs(x) < 1e-3) {
    // (x - sin x)/x = x²/6 - x⁴/120
    return t * (x * x / 6.0) * (1.0 - x * x / 20.0);
  }
  return (x - std::sin(x)) / w;
}

double cutoff_factor(double w, double wc) {
  const double r = w / wc;
  const double d = 1.0 + r * r;
  return 1.0 / (d * d);
}

double coth_half_beta(double w, double beta) {
  const double x = 0.5 * beta * w;
  if (x < 1e-8) return 1.0 / x + x / 3.0;
  return 1.0 / std::tanh(x);
}

}  // namespace

double kernel_f(const BathSpec& bath, double t) {
  bath.validate();
  if (t == 0.0) return 0.0;
  const double beta = bath.beta_hbar_omega01;
  const double wc = bath.cutoff;
  auto integrand = [&](double w) {
    if (w == 0.0) return t * t / beta;  // limit of the guarded product
    return 2.0 * coth_half_beta(w, beta) * one_minus_cos_over(w, t) *
           cutoff_factor(w, wc);
  };
  // Thermal linear growth makes f ~ 2πt/β at large t; use that as the
  // absolute scale for the tolerance.
  const double scale = std::max(1.0, 2.0 * M_PI * t / beta);
  return integrate_gk(integrand, 0.0, 20.0 * wc, 1e-8, 1e-2 * scale, "kernel_f");
}

double kernel_phi(const BathSpec& bath, double t) {
  bath.validate();
  if (t == 0.0) return 0.0;
  const double wc = bath.cutoff;
  auto integrand = [&](double w) {
    if (w == 0.0) return 0.0;
    return 2.0 * wt_minus_sin_over(w, t) * cutoff_factor(w, wc);
  };
  const double scale = std::max(1.0, 0.5 * M_PI * wc * t);
  return integrate_gk(integrand, 0.0, 20.0 * wc, 1e-8, 1e-2 * scale, "kernel_phi");
}

QutritBasisChange qutrit_basis_change() {
  QutritBasisChange b;
  b.to_q = RMatrix(3, 3);
  const double s6 = 1.0 / std::sqrt(6.0);
  const double s2 = 1.0 / std::sqrt(2.0);
  const double s3 = 1.0 / std::sqrt(3.0);
  // |q+>, |q->, |q0> as columns.
  b.to_q << s6, s6, -std::sqrt(2.0 / 3.0),
            s2, -s2, 0.0,
            s3, s3, s3;
  b.q_values = RVector(3);
  b.q_values << std::sqrt(3.0), -std::sqrt(3.0), 0.0;
  return b;
}

CMatrix qutrit_map(const CMatrix& rho0, const DecoherenceKernels& k, double kappa) {
  if (rho0.rows() != 3 || rho0.cols() != 3) {
    throw DimensionError("qutrit_map: density matrix must be 3x3");
  }
  const QutritBasisChange basis = qutrit_basis_change();
  const RMatrix& v = basis.to_q;
  CMatrix rho_q = v.transpose() * rho0 * v;

  const double pref = kappa / (4.0 * M_PI);
  for (int n = 0; n < 3; ++n) {
    for (int m = 0; m < 3; ++m) {
      const double qn = basis.q_values[n];
      const double qm = basis.q_values[m];
      const double decay = -(qn - qm) * (qn - qm) * k.f * pref;
      const double phase = (qn * qn - qm * qm) * k.phi * pref;
      rho_q(n, m) *= std::exp(decay) * Complex(std::cos(phase), std::sin(phase));
    }
  }
  return v * rho_q * v.transpose();
}

CMatrix qutrit_initial_projections() {
  CMatrix rho_q = CMatrix::Zero(3, 3);
  rho_q(0, 0) = 0.5;
  rho_q(1, 1) = 0.5;
  rho_q(0, 1) = -0.5;
  rho_q(1, 0) = -0.5;
  return rho_q;
}

QutritDiagonals short_time_diagonals(const BathSpec& bath, double t) {
  const double f = kernel_f(bath, t);
  const double e = std::exp(-12.0 * f * bath.kappa / (4.0 * M_PI));
  return {(1.0 - e) / 6.0, (1.0 + e) / 2.0, (1.0 - e) / 3.0};
}

}  // namespace transleak
