#include "transleak/bath.hpp"

#include <cmath>
#include <string>

#include "transleak/errors.hpp"
#include "transleak/fft.hpp"
#include "transleak/quadrature.hpp"

namespace transleak {

namespace {
constexpr double kQuadTol = 1e-8;
}

void BathSpec::validate() const {
  if (kappa < 0) throw ConfigError("bath: kappa must be >= 0");
  if (!(beta_hbar_omega01 > 0)) throw ConfigError("bath: beta must be > 0");
  if (!(cutoff > 1.0)) throw ConfigError("bath: cutoff must exceed omega01");
}

double spectral_density(const BathSpec& spec, double omega) {
  const double x = omega / spec.cutoff;
  const double denom = (1.0 + x * x) * (1.0 + x * x);
  return spec.kappa * omega / denom;
}

double fluctuation_spectrum(const BathSpec& spec, double omega) {
  const double beta = spec.beta_hbar_omega01;
  if (std::abs(beta * omega) < 1e-8) {
    // ω -> 0 limit of 2J(ω)/(1 - e^{-βω}) with J ~ κω.
    return 2.0 * spec.kappa / beta * (1.0 + 0.5 * beta * omega);
  }
  return 2.0 * spectral_density(spec, omega) / (1.0 - std::exp(-beta * omega));
}

double rate_spectrum(const BathSpec& spec, double omega) {
  return 0.5 * fluctuation_spectrum(spec, omega);
}

double weak_coupling_decay_rate(const BathSpec& spec) {
  return spec.kappa / std::tanh(0.5 * spec.beta_hbar_omega01);
}

double symmetrized_spectrum(const BathSpec& spec, double omega) {
  const double beta = spec.beta_hbar_omega01;
  const double x = std::abs(omega);
  if (beta * x < 1e-8) return 2.0 * spec.kappa / beta;
  return spectral_density(spec, x) / std::tanh(0.5 * beta * x);
}

namespace {

// Scale of |C(0)| used for the absolute quadrature floor; Re C(0) itself
// is of this order (the integral is dominated by ω ~ ω_c).
double c0_scale(const BathSpec& spec) {
  return std::max(spec.kappa * spec.cutoff * spec.cutoff / (4.0 * M_PI), 1e-300);
}

}  // namespace

namespace {

// Ci(x) = γ + ln x + Σ (-x²)^k / (2k (2k)!) for small x, asymptotic form
// beyond; enough accuracy for the tail correction below.
double cosine_integral(double x) {
  if (x < 5.0) {
    const double gamma = 0.57721566490153286061;
    double sum = 0.0, term = 1.0;
    const double x2 = -x * x;
    for (int k = 1; k < 40; ++k) {
      term *= x2 / ((2 * k) * (2 * k - 1));
      sum += term / (2 * k);
      if (std::abs(term) < 1e-18) break;
    }
    return gamma + std::log(x) + sum;
  }
  double f = 1.0, g = 1.0 / x;
  double xk = 1.0;
  // f(x) ~ Σ (-1)^k (2k)!/x^{2k},  g(x) ~ (1/x) Σ (-1)^k (2k+1)!/x^{2k}
  double fk = 1.0, gk = 1.0;
  for (int k = 1; k <= 5; ++k) {
    fk *= -(2.0 * k - 1) * (2.0 * k) / (x * x);
    gk *= -(2.0 * k) * (2.0 * k + 1) / (x * x);
    f += fk;
    g += gk / x;
  }
  g /= x;
  return std::sin(x) * f / x - std::cos(x) * g;
}

// ∫_Ω^∞ cos(ωt)/ω³ dω = t² G(Ωt), G(x) = cos x/(2x²) - (sin x/x - Ci(x))/2.
double cubic_tail(double omega_lo, double t) {
  if (t == 0.0) return 0.5 / (omega_lo * omega_lo);
  const double x = omega_lo * t;
  const double g = std::cos(x) / (2.0 * x * x) -
                   0.5 * (std::sin(x) / x - cosine_integral(x));
  return t * t * g;
}

}  // namespace

double correlation_re(const BathSpec& spec, double t) {
  spec.validate();
  if (spec.kappa == 0.0) return 0.0;
  const double upper = 20.0 * spec.cutoff;
  const double scale = 1e-2 * c0_scale(spec);
  auto integrand = [&](double w) {
    return symmetrized_spectrum(spec, w) * std::cos(w * t) / (2.0 * M_PI);
  };
  const double val = integrate_gk(integrand, 0.0, upper, kQuadTol, scale, "correlation_re");
  // Past 20 ω_c the integrand is κ ω_c⁴/ω³ (coth -> 1) to 0.25% of itself;
  // without this term the truncation error is ~2.5e-3 of C(0).
  const double wc4 = std::pow(spec.cutoff, 4);
  return val + spec.kappa * wc4 * cubic_tail(upper, std::abs(t)) / (2.0 * M_PI);
}

double correlation_im(const BathSpec& spec, double t) {
  spec.validate();
  if (spec.kappa == 0.0) return 0.0;
  // Wider truncation than the Re part: there is no cheap tail expression
  // here and the ω^{-3} residue at 100 ω_c is below 1e-4 of the Im C peak.
  const double upper = 100.0 * spec.cutoff;
  const double scale = 1e-2 * c0_scale(spec);
  auto integrand = [&](double w) {
    return -spectral_density(spec, w) * std::sin(w * t) / (2.0 * M_PI);
  };
  return integrate_gk(integrand, 0.0, upper, kQuadTol, scale, "correlation_im");
}

double correlation_im_closed_form(const BathSpec& spec, double t) {
  const double wc = spec.cutoff;
  return -spec.kappa * wc * wc * wc * t * std::exp(-wc * t) / 8.0;
}

namespace {

// Re C on a uniform grid in one pass: midpoint discretization of the spectral
// integral, evaluated with a single FFT. On grid times e^{iωmh} aliases
// exactly under ω -> ω + 2πk/h, so the spectrum beyond the grid Nyquist is
// folded in rather than truncated.
std::vector<double> correlation_re_fft(const BathSpec& spec, std::size_t n_points,
                                       double h) {
  const double span = static_cast<double>(n_points) * h;
  // Window 4x the table span (C decays on scale β) and δω fine enough for
  // the midpoint rule on the coth structure.
  const double min_window = std::max(4.0 * span, 2.0 * M_PI / 0.02);
  std::size_t len = next_power_of_two(
      static_cast<std::size_t>(std::ceil(min_window / h)));
  const double dw = 2.0 * M_PI / (static_cast<double>(len) * h);
  const double wrap = 2.0 * M_PI / h;
  const int n_folds =
      std::max(1, static_cast<int>(std::ceil(400.0 * spec.cutoff / wrap)));

  std::vector<std::complex<double>> grid(len, 0.0);
  for (std::size_t j = 0; j < len; ++j) {
    const double w = (static_cast<double>(j) + 0.5) * dw;
    double s = 0.0;
    for (int k = 0; k < n_folds; ++k) s += symmetrized_spectrum(spec, w + k * wrap);
    grid[j] = s;
  }
  ifft_unnormalized(grid);
  std::vector<double> out(n_points, 0.0);
  for (std::size_t m = 0; m < n_points; ++m) {
    // Half-bin phase shift from the midpoint rule.
    const double phase = M_PI * static_cast<double>(m) / static_cast<double>(len);
    const std::complex<double> rot(std::cos(phase), std::sin(phase));
    out[m] = (dw / (2.0 * M_PI)) * (grid[m % len] * rot).real();
  }
  return out;
}

}  // namespace

CorrelationTable correlation_function(const BathSpec& spec, double t_max, double dt) {
  spec.validate();
  if (!(dt > 0) || !(t_max >= 0)) throw ConfigError("correlation_function: bad grid");
  if (dt >= M_PI / spec.cutoff) {
    throw ConfigError("correlation_function: dt must resolve the cutoff (dt < pi/omega_c)");
  }
  const std::size_t n = static_cast<std::size_t>(std::floor(t_max / dt)) + 1;

  CorrelationTable table;
  table.dt = dt;
  table.re_c.resize(n);
  table.im_c.resize(n);

  if (spec.kappa == 0.0) {
    std::fill(table.re_c.begin(), table.re_c.end(), 0.0);
    std::fill(table.im_c.begin(), table.im_c.end(), 0.0);
    return table;
  }

  if (n < 4096) {
    for (std::size_t k = 0; k < n; ++k) {
      table.re_c[k] = correlation_re(spec, static_cast<double>(k) * dt);
      table.im_c[k] = correlation_im(spec, static_cast<double>(k) * dt);
    }
  } else {
    table.re_c = correlation_re_fft(spec, n, dt);
    for (std::size_t k = 0; k < n; ++k) {
      table.im_c[k] = correlation_im_closed_form(spec, static_cast<double>(k) * dt);
    }
    // Spot-validate the FFT path against the adaptive rule.
    const double scale = std::abs(table.re_c[0]);
    for (std::size_t k : {std::size_t{0}, n / 7, n / 3, n / 2}) {
      const double ref = correlation_re(spec, static_cast<double>(k) * dt);
      if (std::abs(ref - table.re_c[k]) > 5e-5 * scale) {
        throw QuadratureError("correlation_function: FFT path disagrees with "
                              "adaptive quadrature at sample " + std::to_string(k));
      }
    }
  }
  return table;
}

}  // namespace transleak
