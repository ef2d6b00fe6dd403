#include "transleak/dynamics.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <thread>

#include "transleak/errors.hpp"
#include "transleak/rng.hpp"

namespace transleak {

Method method_from_string(const std::string& name) {
  if (name == "von_neumann") return Method::von_neumann;
  if (name == "lindblad") return Method::lindblad;
  if (name == "redfield") return Method::redfield;
  if (name == "sled") return Method::sled;
  if (name == "sln") return Method::sln;
  throw ConfigError("unknown method '" + name + "'");
}

std::string method_name(Method m) {
  switch (m) {
    case Method::von_neumann: return "von_neumann";
    case Method::lindblad: return "lindblad";
    case Method::redfield: return "redfield";
    case Method::sled: return "sled";
    case Method::sln: return "sln";
  }
  return "?";
}

void EvolutionSpec::validate(const TransmonModel& model, const BathSpec& bath) const {
  if (!(t_final > 0) || !(dt > 0)) throw ConfigError("evolution: bad time grid");
  if (n_trajectories < 1) throw ConfigError("evolution: n_trajectories must be >= 1");
  if (save_stride < 1) throw ConfigError("evolution: save_stride must be >= 1");
  const double omega_max = model.omega[model.dim() - 1];
  double bound = 0.05 * 2.0 * M_PI / omega_max;
  if (bath.kappa > 0) bound = std::min(bound, 0.1 * 2.0 * M_PI / bath.cutoff);
  if (dt > bound * (1.0 + 1e-12)) {
    throw ConfigError("evolution: dt = " + std::to_string(dt) +
                      " exceeds the stability bound " + std::to_string(bound));
  }
}

namespace {

int superop_index(int a, int b, int n) { return a + b * n; }  // column-major vec

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// vec(L ρ L† - ½{L†L, ρ}) = [conj(L)⊗L - ½ I⊗L†L - ½ (L†L)ᵀ⊗I] vec(ρ)
CMatrix dissipator_superop(const CMatrix& l) {
  const int n = static_cast<int>(l.rows());
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix ldl = l.adjoint() * l;
  return kron(l.conjugate(), l) - 0.5 * kron(id, ldl) -
         0.5 * kron(ldl.transpose(), id);
}

}  // namespace

CMatrix lindblad_generator(const TransmonModel& model, const BathSpec& bath) {
  bath.validate();
  const int n = model.dim();
  const RMatrix q = model.q_normalized();
  CMatrix gen = CMatrix::Zero(n * n, n * n);

  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double gap = model.omega[b] - model.omega[a];
      CMatrix down = CMatrix::Zero(n, n);
      down(a, b) = q(a, b);
      CMatrix up = CMatrix::Zero(n, n);
      up(b, a) = q(b, a);
      gen += rate_spectrum(bath, gap) * dissipator_superop(down);
      gen += rate_spectrum(bath, -gap) * dissipator_superop(up);
    }
  }
  // Collective pure-dephasing channel from the diagonal of q̂ (vanishes at
  // n_g = 0 by parity).
  CMatrix deph = CMatrix::Zero(n, n);
  for (int a = 0; a < n; ++a) deph(a, a) = q(a, a);
  if (deph.cwiseAbs().maxCoeff() > 0) {
    gen += rate_spectrum(bath, 0.0) * dissipator_superop(deph);
  }
  return gen;
}

CMatrix redfield_generator(const TransmonModel& model, const BathSpec& bath) {
  bath.validate();
  const int n = model.dim();
  const RMatrix q = model.q_normalized();
  CMatrix gen = CMatrix::Zero(n * n, n * n);

  // ω_nm = ω_m - ω_n; Π_nm = q_nm |n><m|. Four-term tensor with the
  // golden-rule weight; no secular approximation, principal-value parts
  // dropped as in the source equation.
  auto w = [&](int a, int b) { return model.omega[b] - model.omega[a]; };
  for (int a = 0; a < n; ++a) {
    for (int m = 0; m < n; ++m) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          const double qq = q(a, m) * q(k, l);
          if (qq == 0.0) continue;
          const double c1 =
              0.5 * (rate_spectrum(bath, w(a, m)) + rate_spectrum(bath, -w(k, l)));
          gen(superop_index(a, l, n), superop_index(m, k, n)) += c1 * qq;
          if (k == m) {
            const double c2 = 0.5 * rate_spectrum(bath, w(k, l)) * qq;
            const double c3 = 0.5 * rate_spectrum(bath, -w(a, m)) * qq;
            for (int b = 0; b < n; ++b) {
              gen(superop_index(a, b, n), superop_index(l, b, n)) -= c2;
              gen(superop_index(b, l, n), superop_index(b, a, n)) -= c3;
            }
          }
        }
      }
    }
  }
  return gen;
}

CMatrix steady_state(const TransmonModel& model, const CMatrix& generator) {
  const int n = model.dim();
  const CMatrix h = model.hamiltonian();
  const CMatrix id = CMatrix::Identity(n, n);
  CMatrix full = generator - I * (kron(id, h) - kron(h.transpose(), id));

  CMatrix a(n * n + 1, n * n);
  a.topRows(n * n) = full;
  for (int col = 0; col < n * n; ++col) a(n * n, col) = 0.0;
  for (int d = 0; d < n; ++d) a(n * n, superop_index(d, d, n)) = 1.0;
  CVector rhs = CVector::Zero(n * n + 1);
  rhs(n * n) = 1.0;

  const CVector v = a.colPivHouseholderQr().solve(rhs);
  CMatrix rho(n, n);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c) rho(c, b) = v(superop_index(c, b, n));
  symmetrize(rho);
  return rho;
}

CMatrix rhs_von_neumann(const CMatrix& h, const CMatrix& rho) {
  return -I * (h * rho - rho * h);
}

CMatrix rhs_sled(const CMatrix& h, const RMatrix& q, const CMatrix& p,
                 double kappa, double xi, const CMatrix& rho) {
  const CMatrix comm_h = h * rho - rho * h;
  const CMatrix comm_q = q * rho - rho * q;
  const CMatrix anti_p = p * rho + rho * p;
  const CMatrix fric = q * anti_p - anti_p * q;
  return -I * comm_h + I * xi * comm_q - I * (0.25 * kappa) * fric;
}

CMatrix rhs_sln(const CMatrix& h, const RMatrix& q, double xi,
                std::complex<double> nu, const CMatrix& rho) {
  const CMatrix comm_h = h * rho - rho * h;
  const CMatrix comm_q = q * rho - rho * q;
  const CMatrix anti_q = q * rho + rho * q;
  return -I * comm_h + I * xi * comm_q + I * nu * anti_q;
}

namespace {

// Shared fixed-step RK4 machinery. The right-hand side is
//   dρ/dt = -i[H(t), ρ] + G·vec(ρ) (+ stochastic terms),
// with H(t) = H_S + drive(t) rebuilt per stage.
struct Stepper {
  const TransmonModel* model;
  const BathSpec* bath;
  const DriveTerm* drive;
  Method method;
  double kappa;

  CMatrix h_static;
  CMatrix generator;  // lindblad/redfield superoperator, possibly empty
  RMatrix q_norm;
  CMatrix p_norm;

  Stepper(const TransmonModel& m, const BathSpec& b, const DriveTerm* d, Method meth)
      : model(&m), bath(&b), drive(d), method(meth), kappa(b.kappa) {
    h_static = m.hamiltonian();
    q_norm = m.q_normalized();
    p_norm = conjugate_operator(m) / m.q_op(0, 1);
    if (method == Method::lindblad) generator = lindblad_generator(m, b);
    if (method == Method::redfield) generator = redfield_generator(m, b);
  }

  CMatrix hamiltonian_at(double t) const {
    CMatrix h = h_static;
    if (drive && *drive) (*drive)(t, h);
    return h;
  }

  CMatrix deterministic_rhs(double t, const CMatrix& rho) const {
    CMatrix out = rhs_von_neumann(hamiltonian_at(t), rho);
    if (generator.size() > 0) {
      const int n = model->dim();
      Eigen::Map<const CVector> v(rho.data(), n * n);
      CVector gv = generator * v;
      out += Eigen::Map<const CMatrix>(gv.data(), n, n);
    }
    return out;
  }

  // xi/nu sampled on the half-step grid; step s uses indices 2s, 2s+1, 2s+2.
  CMatrix stochastic_rhs(double t, const CMatrix& rho, double xi,
                         std::complex<double> nu) const {
    if (method == Method::sled) {
      return rhs_sled(hamiltonian_at(t), q_norm, p_norm, kappa, xi, rho);
    }
    return rhs_sln(hamiltonian_at(t), q_norm, xi, nu, rho);
  }
};

void rk4_deterministic_step(const Stepper& st, double t, double dt, CMatrix& rho) {
  const CMatrix k1 = st.deterministic_rhs(t, rho);
  const CMatrix k2 = st.deterministic_rhs(t + 0.5 * dt, rho + (0.5 * dt) * k1);
  const CMatrix k3 = st.deterministic_rhs(t + 0.5 * dt, rho + (0.5 * dt) * k2);
  const CMatrix k4 = st.deterministic_rhs(t + dt, rho + dt * k3);
  rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

  const double defect = hermiticity_defect(rho);
  if (defect > 1e-8) {
    throw StepError("deterministic step: hermiticity defect " +
                    std::to_string(defect));
  }
  symmetrize(rho);
  const double trace_err = std::abs(rho.trace().real() - 1.0) +
                           std::abs(rho.trace().imag());
  if (trace_err > 1e-8) {
    throw StepError("deterministic step: trace drift " + std::to_string(trace_err));
  }
}

void rk4_stochastic_step(const Stepper& st, double t, double dt, std::size_t s,
                         const NoisePath& noise, CMatrix& rho) {
  const double x0 = noise.xi[2 * s], xh = noise.xi[2 * s + 1], x1 = noise.xi[2 * s + 2];
  const auto n0 = noise.nu[2 * s], nh = noise.nu[2 * s + 1], n1 = noise.nu[2 * s + 2];
  const CMatrix k1 = st.stochastic_rhs(t, rho, x0, n0);
  const CMatrix k2 = st.stochastic_rhs(t + 0.5 * dt, rho + (0.5 * dt) * k1, xh, nh);
  const CMatrix k3 = st.stochastic_rhs(t + 0.5 * dt, rho + (0.5 * dt) * k2, xh, nh);
  const CMatrix k4 = st.stochastic_rhs(t + dt, rho + dt * k3, x1, n1);
  rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (st.method == Method::sled) symmetrize(rho);
}

std::size_t n_steps_for(const EvolutionSpec& spec) {
  return static_cast<std::size_t>(std::ceil(spec.t_final / spec.dt - 1e-9));
}

std::vector<std::size_t> saved_steps(const EvolutionSpec& spec, std::size_t n_steps) {
  std::vector<std::size_t> saved;
  for (std::size_t s = 0; s <= n_steps; s += spec.save_stride) saved.push_back(s);
  if (saved.back() != n_steps) saved.push_back(n_steps);
  return saved;
}

}  // namespace

Trajectory evolve_deterministic(const TransmonModel& model, const BathSpec& bath,
                                const DriveTerm* drive, const CMatrix& rho0,
                                const EvolutionSpec& spec) {
  spec.validate(model, bath);
  Method method = spec.method;
  if (method == Method::lindblad || method == Method::redfield) {
    if (bath.kappa == 0.0) method = Method::von_neumann;
  }
  Stepper st(model, bath, drive, method);

  const std::size_t n_steps = n_steps_for(spec);
  const auto save_at = saved_steps(spec, n_steps);

  Trajectory traj;
  traj.method = spec.method;
  traj.seed = spec.master_seed;
  CMatrix rho = rho0;
  std::size_t save_idx = 0;
  for (std::size_t s = 0; s <= n_steps; ++s) {
    if (save_idx < save_at.size() && save_at[save_idx] == s) {
      traj.times.push_back(static_cast<double>(s) * spec.dt);
      traj.states.push_back(rho);
      ++save_idx;
    }
    if (s < n_steps) rk4_deterministic_step(st, static_cast<double>(s) * spec.dt, spec.dt, rho);
  }
  return traj;
}

namespace {

// Accumulates Σx and Σx² per saved element; merging chunk partials in chunk
// order keeps the reduction bitwise independent of the thread count.
struct EnsemblePartial {
  std::vector<CMatrix> sum, sumsq;       // sumsq packs (ΣRe², ΣIm²)
  std::vector<double> p1, p1sq;
  std::vector<std::complex<double>> tr;
  std::vector<std::complex<double>> trsq;
  long count = 0;
  long resampled = 0;

  EnsemblePartial(std::size_t n_saved, int dim) {
    sum.assign(n_saved, CMatrix::Zero(dim, dim));
    sumsq.assign(n_saved, CMatrix::Zero(dim, dim));
    p1.assign(n_saved, 0.0);
    p1sq.assign(n_saved, 0.0);
    tr.assign(n_saved, {0.0, 0.0});
    trsq.assign(n_saved, {0.0, 0.0});
  }

  void add_state(std::size_t slot, const CMatrix& rho) {
    sum[slot] += rho;
    sumsq[slot] += rho.real().cwiseProduct(rho.real()).cast<Complex>() +
                   I * rho.imag().cwiseProduct(rho.imag()).cast<Complex>();
    const Complex t = rho.trace();
    const double p = rho(0, 0).real() + rho(1, 1).real();
    p1[slot] += p;
    p1sq[slot] += p * p;
    tr[slot] += t;
    trsq[slot] += Complex(t.real() * t.real(), t.imag() * t.imag());
  }

  void merge(const EnsemblePartial& other) {
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum[i] += other.sum[i];
      sumsq[i] += other.sumsq[i];
      p1[i] += other.p1[i];
      p1sq[i] += other.p1sq[i];
      tr[i] += other.tr[i];
      trsq[i] += other.trsq[i];
    }
    count += other.count;
    resampled += other.resampled;
  }
};

constexpr std::size_t kChunk = 64;

}  // namespace

EnsembleTrajectory evolve_ensemble(const TransmonModel& model, const BathSpec& bath,
                                   const DriveTerm* drive, const CMatrix& rho0,
                                   const EvolutionSpec& spec, int n_threads) {
  spec.validate(model, bath);
  if (!spec.stochastic()) {
    throw ConfigError("evolve_ensemble: method must be sled or sln");
  }
  const std::size_t n_steps = n_steps_for(spec);
  const auto save_at = saved_steps(spec, n_steps);
  const int dim = static_cast<int>(rho0.rows());

  // Noise on the half-step grid, one synthesizer shared across trajectories.
  const NoiseSynthesizer synth(bath, 2 * n_steps + 1, 0.5 * spec.dt);
  const Stepper st(model, bath, drive, spec.method);

  const std::size_t n_traj = static_cast<std::size_t>(spec.n_trajectories);
  const std::size_t n_chunks = (n_traj + kChunk - 1) / kChunk;

  auto run_one = [&](std::size_t index, EnsemblePartial& acc) {
    const std::uint64_t pair = spec.antithetic ? index / 2 : index;
    const bool negate = spec.antithetic && (index % 2 == 1);
    long resamples = 0;
    for (;;) {
      const std::uint64_t seed =
          stream_seed(spec.master_seed, pair + resamples * 0x10000000ull);
      const NoisePath noise = synth.generate(seed, negate);
      CMatrix rho = rho0;
      bool diverged = false;
      std::size_t save_idx = 0;
      std::vector<CMatrix> snapshots(save_at.size());
      for (std::size_t s = 0; s <= n_steps && !diverged; ++s) {
        if (save_idx < save_at.size() && save_at[save_idx] == s) {
          snapshots[save_idx] = rho;
          ++save_idx;
        }
        if (s == n_steps) break;
        rk4_stochastic_step(st, static_cast<double>(s) * spec.dt, spec.dt, s,
                            noise, rho);
        if (spec.method == Method::sled) {
          const double drift = std::abs(rho.trace().real() - 1.0) +
                               std::abs(rho.trace().imag());
          if (drift > 1e-6) {
            throw StepError("sled: trace drift " + std::to_string(drift) +
                            " on trajectory " + std::to_string(index));
          }
        }
        if (rho.cwiseAbs().maxCoeff() > spec.divergence_threshold) diverged = true;
      }
      if (!diverged) {
        for (std::size_t i = 0; i < save_at.size(); ++i) acc.add_state(i, snapshots[i]);
        acc.count += 1;
        acc.resampled += resamples;
        return;
      }
      ++resamples;
      if (resamples > 64) {
        throw TrajectoryDiverged("trajectory " + std::to_string(index) +
                                 " keeps diverging after 64 resamples");
      }
    }
  };

  EnsemblePartial global(save_at.size(), dim);
  std::exception_ptr failure;
  std::mutex merge_mutex;
  std::map<std::size_t, std::unique_ptr<EnsemblePartial>> pending;
  std::size_t next_to_merge = 0;
  std::atomic<std::size_t> next_chunk{0};

  auto worker = [&]() {
    for (;;) {
      const std::size_t chunk = next_chunk.fetch_add(1);
      if (chunk >= n_chunks) return;
      auto partial = std::make_unique<EnsemblePartial>(save_at.size(), dim);
      const std::size_t begin = chunk * kChunk;
      const std::size_t end = std::min(begin + kChunk, n_traj);
      try {
        for (std::size_t i = begin; i < end; ++i) run_one(i, *partial);
      } catch (...) {
        std::lock_guard<std::mutex> lock(merge_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
      std::lock_guard<std::mutex> lock(merge_mutex);
      pending[chunk] = std::move(partial);
      while (!pending.empty() && pending.begin()->first == next_to_merge) {
        global.merge(*pending.begin()->second);
        pending.erase(pending.begin());
        ++next_to_merge;
      }
    }
  };

  if (n_threads < 1) n_threads = 1;
  std::vector<std::thread> pool;
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  if (global.resampled >
      static_cast<long>(spec.max_resample_fraction * static_cast<double>(n_traj)) &&
      global.resampled > 0) {
    throw TrajectoryDiverged(
        "resample rate " + std::to_string(global.resampled) + "/" +
        std::to_string(n_traj) + " exceeds the configured bound");
  }

  const double n = static_cast<double>(global.count);
  EnsembleTrajectory out;
  out.n_trajectories = static_cast<int>(global.count);
  out.resampled = global.resampled;
  out.mean.method = spec.method;
  out.mean.seed = spec.master_seed;
  for (std::size_t i = 0; i < save_at.size(); ++i) {
    out.mean.times.push_back(static_cast<double>(save_at[i]) * spec.dt);
    CMatrix mean = global.sum[i] / n;
    CMatrix se(dim, dim);
    for (int a = 0; a < dim; ++a) {
      for (int b = 0; b < dim; ++b) {
        const double vr = std::max(
            0.0, global.sumsq[i](a, b).real() / n -
                     mean(a, b).real() * mean(a, b).real());
        const double vi = std::max(
            0.0, global.sumsq[i](a, b).imag() / n -
                     mean(a, b).imag() * mean(a, b).imag());
        se(a, b) = Complex(std::sqrt(vr / std::max(n - 1, 1.0)),
                           std::sqrt(vi / std::max(n - 1, 1.0)));
      }
    }
    out.mean.states.push_back(std::move(mean));
    out.stderr_elem.push_back(std::move(se));

    const double p1m = global.p1[i] / n;
    const double p1v = std::max(0.0, global.p1sq[i] / n - p1m * p1m);
    out.p1_mean.push_back(p1m);
    out.p1_se.push_back(std::sqrt(p1v / std::max(n - 1, 1.0)));
    const Complex trm = global.tr[i] / n;
    const double tvr = std::max(0.0, global.trsq[i].real() / n - trm.real() * trm.real());
    const double tvi = std::max(0.0, global.trsq[i].imag() / n - trm.imag() * trm.imag());
    out.trace_mean.push_back(trm);
    out.trace_se.push_back(std::sqrt((tvr + tvi) / std::max(n - 1, 1.0)));
  }
  return out;
}

EnsembleTrajectory evolve(const TransmonModel& model, const BathSpec& bath,
                          const DriveTerm* drive, const CMatrix& rho0,
                          const EvolutionSpec& spec, int n_threads) {
  if (spec.stochastic()) {
    return evolve_ensemble(model, bath, drive, rho0, spec, n_threads);
  }
  EnsembleTrajectory out;
  out.mean = evolve_deterministic(model, bath, drive, rho0, spec);
  const int dim = static_cast<int>(rho0.rows());
  out.n_trajectories = 1;
  for (std::size_t i = 0; i < out.mean.states.size(); ++i) {
    out.stderr_elem.push_back(CMatrix::Zero(dim, dim));
    const CMatrix& rho = out.mean.states[i];
    out.p1_mean.push_back(rho(0, 0).real() + rho(1, 1).real());
    out.p1_se.push_back(0.0);
    out.trace_mean.push_back(rho.trace());
    out.trace_se.push_back(0.0);
  }
  return out;
}

}  // namespace transleak
