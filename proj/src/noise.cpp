#include "transleak/noise.hpp"

#include <cmath>
#include <string>

#include "transleak/errors.hpp"
#include "transleak/fft.hpp"
#include "transleak/rng.hpp"

namespace transleak {

NoiseContract make_noise_contract(const BathSpec& spec, std::size_t n_lags, double dt) {
  const CorrelationTable table = correlation_function(
      spec, dt * static_cast<double>(n_lags), dt);
  NoiseContract c;
  c.dt = dt;
  c.xixi = table.re_c;
  c.xinu.resize(table.length());
  for (std::size_t k = 0; k < table.length(); ++k) {
    c.xinu[k] = std::complex<double>(0.0, table.im_c[k]);
  }
  return c;
}

NoiseSynthesizer::NoiseSynthesizer(const BathSpec& spec, std::size_t n_samples,
                                   double dt)
    : n_samples_(n_samples), dt_(dt) {
  spec.validate();
  if (n_samples == 0 || !(dt > 0)) throw ConfigError("noise: empty grid");
  if (spec.kappa == 0.0) {
    zero_ = true;
    m_ = 4 * next_power_of_two(n_samples);
    return;
  }

  m_ = 4 * next_power_of_two(n_samples);
  const std::size_t m = m_;
  const double wrap = 2.0 * M_PI / dt;
  const double coverage = 400.0 * spec.cutoff;
  const int folds = std::max(1, static_cast<int>(std::ceil(coverage / wrap)));

  // Circulant eigenvalues from the folded spectrum, λ_j = S_fold(ω_j)/dt.
  sqrt_lambda_.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    double w = 2.0 * M_PI * static_cast<double>(j) / (static_cast<double>(m) * dt);
    if (j > m / 2) w -= wrap;  // map to (-π/dt, π/dt]
    double s = 0.0;
    for (int k = -folds; k <= folds; ++k) {
      const double shifted = std::abs(w + static_cast<double>(k) * wrap);
      if (shifted <= coverage) s += symmetrized_spectrum(spec, shifted);
    }
    const double lambda = s / dt;
    if (lambda < 0.0) {
      throw EmbeddingError("noise: negative spectral weight at mode " +
                           std::to_string(j));
    }
    sqrt_lambda_[j] = std::sqrt(lambda);
  }

  // Causal cross filter from the one-sided transform of i Im C. The kernel
  // decays on the cutoff scale 1/ω_c, a handful of samples.
  std::vector<std::complex<double>> mu(m, 0.0);
  for (std::size_t k = 0; k <= m / 2; ++k) {
    const double im_c =
        correlation_im_closed_form(spec, static_cast<double>(k) * dt);
    mu[k] = std::complex<double>(0.0, im_c);
  }
  fft(mu);  // μ̂_j = Σ_k μ(k) e^{-2πi jk/M}
  filter_.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    filter_[j] = mu[(m - j) % m] / sqrt_lambda_[j];
  }
}

NoisePath NoiseSynthesizer::generate(std::uint64_t seed, bool negate) const {
  NoisePath path;
  path.dt = dt_;
  path.seed = seed;
  path.xi.assign(n_samples_, 0.0);
  path.nu.assign(n_samples_, {0.0, 0.0});
  if (zero_) return path;

  const std::size_t m = m_;
  Xoshiro256 rng(seed);
  const double flip = negate ? -1.0 : 1.0;

  // Hermitian white fields: u_{M-j} = conj(u_j), unit power per mode.
  std::vector<std::complex<double>> u(m), v(m);
  const double half = std::sqrt(0.5);
  u[0] = flip * rng.next_normal();
  v[0] = flip * rng.next_normal();
  u[m / 2] = flip * rng.next_normal();
  v[m / 2] = flip * rng.next_normal();
  for (std::size_t j = 1; j < m / 2; ++j) {
    const double ar = rng.next_normal(), ai = rng.next_normal();
    const double br = rng.next_normal(), bi = rng.next_normal();
    u[j] = flip * half * std::complex<double>(ar, ai);
    u[m - j] = std::conj(u[j]);
    v[j] = flip * half * std::complex<double>(br, bi);
    v[m - j] = std::conj(v[j]);
  }

  std::vector<std::complex<double>> work(m);
  for (std::size_t j = 0; j < m; ++j) work[j] = sqrt_lambda_[j] * u[j];
  ifft_unnormalized(work);
  const double norm = 1.0 / std::sqrt(static_cast<double>(m));
  for (std::size_t k = 0; k < n_samples_; ++k) path.xi[k] = norm * work[k].real();

  for (std::size_t j = 0; j < m; ++j) {
    work[j] = filter_[j] * (u[j] + std::complex<double>(0.0, 1.0) * v[j]);
  }
  ifft_unnormalized(work);
  for (std::size_t k = 0; k < n_samples_; ++k) path.nu[k] = norm * work[k];

  return path;
}

std::vector<double> synthesize_xi(const BathSpec& spec, std::size_t n_steps,
                                  double dt, std::uint64_t seed) {
  return NoiseSynthesizer(spec, n_steps, dt).generate(seed).xi;
}

NoisePath synthesize_path(const BathSpec& spec, std::size_t n_steps, double dt,
                          std::uint64_t seed) {
  return NoiseSynthesizer(spec, n_steps, dt).generate(seed);
}

CorrelationEstimate estimate_correlations(const std::vector<NoisePath>& paths,
                                          std::size_t anchor, int lag_min,
                                          int lag_max) {
  if (paths.size() < 100) {
    throw ContractError("estimate_correlations: ensemble size must be >= 100");
  }
  if (lag_min > lag_max) throw ConfigError("estimate_correlations: bad lag range");
  const std::size_t n = paths.front().xi.size();
  if (anchor >= n || anchor + static_cast<long>(lag_max) >= static_cast<long>(n) ||
      static_cast<long>(anchor) + lag_min < 0) {
    throw ConfigError("estimate_correlations: lag window outside the grid");
  }

  const std::size_t n_lags = static_cast<std::size_t>(lag_max - lag_min + 1);
  const std::size_t n_paths = paths.size();
  CorrelationEstimate est;
  est.dt = paths.front().dt;
  est.lag_min = lag_min;
  est.xixi.assign(n_lags, 0.0);
  est.xinu.assign(n_lags, 0.0);
  est.nunu.assign(n_lags, 0.0);
  est.xixi_se.assign(n_lags, 0.0);
  est.xinu_se.assign(n_lags, 0.0);
  est.nunu_se.assign(n_lags, 0.0);

  using C = std::complex<double>;
  std::vector<C> sum_xx(n_lags, 0.0), sum_xn(n_lags, 0.0), sum_nn(n_lags, 0.0);
  std::vector<C> sq_xx(n_lags, 0.0), sq_xn(n_lags, 0.0), sq_nn(n_lags, 0.0);

  for (const NoisePath& p : paths) {
    const double xa = p.xi[anchor];
    const C na = p.nu[anchor];
    for (std::size_t i = 0; i < n_lags; ++i) {
      const std::size_t k = anchor + static_cast<std::size_t>(
          static_cast<long>(lag_min) + static_cast<long>(i));
      const C xx = p.xi[k] * xa;
      const C xn = p.xi[k] * na;
      const C nn = p.nu[k] * na;
      sum_xx[i] += xx;
      sum_xn[i] += xn;
      sum_nn[i] += nn;
      sq_xx[i] += C(xx.real() * xx.real(), xx.imag() * xx.imag());
      sq_xn[i] += C(xn.real() * xn.real(), xn.imag() * xn.imag());
      sq_nn[i] += C(nn.real() * nn.real(), nn.imag() * nn.imag());
    }
  }

  const double inv = 1.0 / static_cast<double>(n_paths);
  auto se = [&](C sum, C sq) {
    const double var_re =
        std::max(0.0, sq.real() * inv - (sum.real() * inv) * (sum.real() * inv));
    const double var_im =
        std::max(0.0, sq.imag() * inv - (sum.imag() * inv) * (sum.imag() * inv));
    return std::sqrt(std::max(var_re, var_im) / (static_cast<double>(n_paths) - 1));
  };
  for (std::size_t i = 0; i < n_lags; ++i) {
    est.xixi[i] = sum_xx[i] * inv;
    est.xinu[i] = sum_xn[i] * inv;
    est.nunu[i] = sum_nn[i] * inv;
    est.xixi_se[i] = se(sum_xx[i], sq_xx[i]);
    est.xinu_se[i] = se(sum_xn[i], sq_xn[i]);
    est.nunu_se[i] = se(sum_nn[i], sq_nn[i]);
  }
  return est;
}

}  // namespace transleak
