#include "transleak/scenario.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include "transleak/analytic.hpp"
#include "transleak/control.hpp"
#include "transleak/dynamics.hpp"
#include "transleak/errors.hpp"
#include "transleak/metrics.hpp"
#include "transleak/noise.hpp"
#include "transleak/rng.hpp"
#include "transleak/toml.hpp"

namespace transleak {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Staged output directory: everything goes into a hidden partial directory
// that is renamed into place only on success.
class OutputStage {
 public:
  OutputStage(const std::string& base, const std::string& name) {
    final_ = fs::path(base) / name;
    tmp_ = fs::path(base) / ("." + name + ".partial");
    std::error_code ec;
    fs::remove_all(tmp_, ec);
    fs::create_directories(tmp_);
  }

  ~OutputStage() {
    if (!committed_) {
      std::error_code ec;
      fs::remove_all(tmp_, ec);
    }
  }

  void write_file(const std::string& name, const std::string& content) {
    std::ofstream out(tmp_ / name, std::ios::binary);
    if (!out) throw ConfigError("cannot write output file " + (tmp_ / name).string());
    out << content;
    files_.push_back(name);
  }

  void commit() {
    std::error_code ec;
    fs::remove_all(final_, ec);
    fs::create_directories(final_.parent_path(), ec);
    fs::rename(tmp_, final_);
    committed_ = true;
  }

  const std::vector<std::string>& files() const { return files_; }
  std::string final_path() const { return final_.string(); }

 private:
  fs::path final_, tmp_;
  std::vector<std::string> files_;
  bool committed_ = false;
};

// Wraps the parsed table and records every key that was consumed, so the
// manifest provably contains each physical parameter the run used.
class ScenarioReader {
 public:
  explicit ScenarioReader(TomlTable table) : table_(std::move(table)) {}

  double number(const std::string& key) {
    const double v = table_.require_number(key);
    consumed_[key] = v;
    return v;
  }
  double number_or(const std::string& key, double fallback) {
    const double v = table_.number_or(key, fallback);
    consumed_[key] = v;
    return v;
  }
  std::string string_or(const std::string& key, const std::string& fallback) {
    const std::string v = table_.string_or(key, fallback);
    consumed_[key] = v;
    return v;
  }
  std::string require_string(const std::string& key) {
    const std::string v = table_.require_string(key);
    consumed_[key] = v;
    return v;
  }
  bool bool_or(const std::string& key, bool fallback) {
    const bool v = table_.bool_or(key, fallback);
    consumed_[key] = v;
    return v;
  }
  std::vector<double> numbers(const std::string& key) {
    const auto v = table_.require_number_array(key);
    consumed_[key] = v;
    return v;
  }
  std::vector<double> numbers_or(const std::string& key,
                                 const std::vector<double>& fallback) {
    const auto v = table_.number_array_or(key, fallback);
    consumed_[key] = v;
    return v;
  }
  std::vector<std::string> strings_or(const std::string& key,
                                      const std::vector<std::string>& fallback) {
    const auto v = table_.string_array_or(key, fallback);
    consumed_[key] = v;
    return v;
  }
  bool has(const std::string& key) const { return table_.has(key); }

  const json& consumed() const { return consumed_; }

 private:
  TomlTable table_;
  json consumed_;
};

TransmonSpec read_transmon(ScenarioReader& r) {
  TransmonSpec spec;
  spec.ej_over_ec = r.number_or("transmon.ej_over_ec", 100.0);
  spec.n_g = r.number_or("transmon.n_g", 0.0);
  spec.n_levels = static_cast<int>(r.number_or("transmon.n_levels", 5));
  spec.charge_cutoff = static_cast<int>(r.number_or("transmon.charge_cutoff", 15));
  return spec;
}

BathSpec read_bath(ScenarioReader& r) {
  BathSpec bath;
  bath.kappa = r.number_or("bath.kappa", 0.2);
  bath.beta_hbar_omega01 = r.number_or("bath.beta", 5.0);
  bath.cutoff = r.number_or("bath.cutoff", 50.0);
  return bath;
}

EvolutionSpec read_evolution(ScenarioReader& r, std::uint64_t seed_fallback) {
  EvolutionSpec spec;
  spec.method = method_from_string(r.string_or("evolution.method", "sled"));
  spec.t_final = r.number("evolution.t_final");
  spec.dt = r.number_or("evolution.dt", 0.01);
  spec.n_trajectories = static_cast<int>(r.number_or("evolution.n_trajectories", 10000));
  spec.master_seed = static_cast<std::uint64_t>(
      r.number_or("evolution.master_seed", static_cast<double>(seed_fallback)));
  spec.save_stride = static_cast<int>(r.number_or("evolution.save_stride", 1));
  spec.antithetic = r.bool_or("evolution.antithetic", true);
  return spec;
}

CMatrix excited_state(int dim) {
  CMatrix rho = CMatrix::Zero(dim, dim);
  rho(1, 1) = 1.0;
  return rho;
}

// Parallel map over sweep points with deterministic output slots; failures
// are aggregated and fail the whole run.
void parallel_points(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  std::atomic<std::size_t> next{0};
  std::vector<std::string> errors(n);
  std::atomic<bool> any_error{false};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (const std::exception& e) {
        errors[i] = e.what();
        any_error = true;
      }
    }
  };
  std::vector<std::thread> pool;
  const int t = std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(n, 1));
  for (int k = 0; k < t; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (any_error) {
    std::string msg = "sweep failures:";
    for (std::size_t i = 0; i < n; ++i) {
      if (!errors[i].empty()) msg += "\n  point " + std::to_string(i) + ": " + errors[i];
    }
    throw std::runtime_error(msg);
  }
}

std::string diag_header(int dim, const std::string& prefix, bool with_se) {
  std::string h;
  for (int k = 0; k < dim; ++k) {
    h += "," + prefix + "p" + std::to_string(k);
    if (with_se) h += "," + prefix + "p" + std::to_string(k) + "_se";
  }
  return h;
}

// ---------------------------------------------------------------------------
// Scenario workers
// ---------------------------------------------------------------------------

struct ScenarioContext {
  ScenarioReader& reader;
  OutputStage& stage;
  RunOptions options;
  std::uint64_t seed;
  int threads;
  long resampled = 0;
};

void scenario_decay(ScenarioContext& ctx) {
  ScenarioReader& r = ctx.reader;
  TransmonSpec tspec = read_transmon(r);
  const BathSpec bath = read_bath(r);
  EvolutionSpec evo = read_evolution(r, ctx.seed);
  if (ctx.options.seed_override) evo.master_seed = *ctx.options.seed_override;
  const std::vector<double> levels =
      r.numbers_or("sweep.n_levels", {static_cast<double>(tspec.n_levels)});
  const double kappa_t = weak_coupling_decay_rate(bath);

  for (double nd : levels) {
    tspec.n_levels = static_cast<int>(nd);
    const TransmonModel model = diagonalize_and_truncate(tspec);
    const EnsembleTrajectory ens = evolve(model, bath, nullptr,
                                          excited_state(model.dim()), evo, ctx.threads);
    ctx.resampled += ens.resampled;

    std::string csv = "t,kappa_T_t" + diag_header(model.dim(), "", evo.stochastic()) +
                      ",leakage,leakage_se,trace_re,trace_se\n";
    for (std::size_t i = 0; i < ens.mean.times.size(); ++i) {
      const CMatrix& rho = ens.mean.states[i];
      csv += fmt(ens.mean.times[i]) + "," + fmt(kappa_t * ens.mean.times[i]);
      for (int k = 0; k < model.dim(); ++k) {
        csv += "," + fmt(rho(k, k).real());
        if (evo.stochastic()) csv += "," + fmt(ens.stderr_elem[i](k, k).real());
      }
      csv += "," + fmt(1.0 - ens.p1_mean[i]) + "," + fmt(ens.p1_se[i]);
      csv += "," + fmt(ens.trace_mean[i].real()) + "," + fmt(ens.trace_se[i]) + "\n";
    }
    ctx.stage.write_file("decay_n" + std::to_string(model.dim()) + ".csv", csv);
  }
}

void scenario_shorttime(ScenarioContext& ctx) {
  ScenarioReader& r = ctx.reader;
  TransmonSpec tspec = read_transmon(r);
  tspec.n_levels = 3;
  const BathSpec bath = read_bath(r);
  EvolutionSpec evo = read_evolution(r, ctx.seed);
  if (ctx.options.seed_override) evo.master_seed = *ctx.options.seed_override;
  const TransmonModel model = diagonalize_and_truncate(tspec);
  const double kappa_t = weak_coupling_decay_rate(bath);

  evo.method = Method::sled;
  const EnsembleTrajectory sled = evolve(model, bath, nullptr, excited_state(3), evo, ctx.threads);
  evo.method = Method::sln;
  const EnsembleTrajectory sln = evolve(model, bath, nullptr, excited_state(3), evo, ctx.threads);
  ctx.resampled += sled.resampled + sln.resampled;

  std::string csv = "t,kappa_T_t,ana_p0,ana_p1,ana_p2" + diag_header(3, "sled_", true) +
                    diag_header(3, "sln_", true) + "\n";
  for (std::size_t i = 0; i < sled.mean.times.size(); ++i) {
    const double t = sled.mean.times[i];
    const QutritDiagonals ana = short_time_diagonals(bath, t);
    csv += fmt(t) + "," + fmt(kappa_t * t);
    csv += "," + fmt(ana.p0) + "," + fmt(ana.p1) + "," + fmt(ana.p2);
    for (int k = 0; k < 3; ++k) {
      csv += "," + fmt(sled.mean.states[i](k, k).real()) + "," +
             fmt(sled.stderr_elem[i](k, k).real());
    }
    for (int k = 0; k < 3; ++k) {
      csv += "," + fmt(sln.mean.states[i](k, k).real()) + "," +
             fmt(sln.stderr_elem[i](k, k).real());
    }
    csv += "\n";
  }
  ctx.stage.write_file("shorttime.csv", csv);
}

struct LeakagePoint {
  double l_max = 0, l_max_se = 0, t_max = 0;
};

LeakagePoint ensemble_leakage_max(const EnsembleTrajectory& ens) {
  std::vector<double> leak(ens.p1_mean.size());
  for (std::size_t i = 0; i < leak.size(); ++i) leak[i] = 1.0 - ens.p1_mean[i];
  LeakagePoint pt;
  refine_maximum(ens.mean.times, leak, &pt.l_max, &pt.t_max);
  std::size_t k = 0;
  for (std::size_t i = 1; i < leak.size(); ++i)
    if (leak[i] > leak[k]) k = i;
  pt.l_max_se = ens.p1_se[k];
  return pt;
}

void scenario_leakage_sweep(ScenarioContext& ctx, bool tmax_flavor) {
  ScenarioReader& r = ctx.reader;
  TransmonSpec tspec = read_transmon(r);
  BathSpec bath = read_bath(r);
  EvolutionSpec evo = read_evolution(r, ctx.seed);
  if (ctx.options.seed_override) evo.master_seed = *ctx.options.seed_override;
  const std::vector<double> kappas = r.numbers_or("sweep.kappa", {bath.kappa});
  const std::vector<double> betas = r.numbers_or("sweep.beta", {bath.beta_hbar_omega01});
  const TransmonModel model = diagonalize_and_truncate(tspec);
  const double gibbs_ref_beta = r.number_or("sweep.gibbs_reference_beta", 2.0);
  const double gibbs_ref = gibbs_leakage(model, gibbs_ref_beta);

  struct Row {
    double kappa, beta;
    LeakagePoint pt;
    double gibbs;
    long resampled;
  };
  std::vector<Row> rows(kappas.size() * betas.size());
  parallel_points(rows.size(), 1, [&](std::size_t idx) {
    // Points run serially; trajectory parallelism lives inside evolve().
    const double kappa = kappas[idx / betas.size()];
    const double beta = betas[idx % betas.size()];
    BathSpec b = bath;
    b.kappa = kappa;
    b.beta_hbar_omega01 = beta;
    EvolutionSpec e = evo;
    const EnsembleTrajectory ens =
        evolve(model, b, nullptr, excited_state(model.dim()), e, ctx.threads);
    rows[idx] = {kappa, beta, ensemble_leakage_max(ens), gibbs_leakage(model, beta),
                 ens.resampled};
  });

  std::string csv =
      "kappa,beta,l_max,l_max_se,t_max,gibbs_leakage,gibbs_leakage_ref\n";
  for (const Row& row : rows) {
    ctx.resampled += row.resampled;
    csv += fmt(row.kappa) + "," + fmt(row.beta) + "," + fmt(row.pt.l_max) + "," +
           fmt(row.pt.l_max_se) + "," + fmt(row.pt.t_max) + "," + fmt(row.gibbs) +
           "," + fmt(gibbs_ref) + "\n";
  }
  ctx.stage.write_file(tmax_flavor ? "tmax_sweep.csv" : "lmax_sweep.csv", csv);
}

// Exact propagation under a static Hermitian Hamiltonian (used by the RWA
// scenarios, no integrator error).
struct StaticPropagator {
  CMatrix vecs;
  RVector vals;

  explicit StaticPropagator(const CMatrix& h) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    vecs = es.eigenvectors();
    vals = es.eigenvalues();
  }

  CVector apply(const CVector& psi0, double t) const {
    CVector phase(vals.size());
    for (int k = 0; k < vals.size(); ++k) {
      phase(k) = Complex(std::cos(-vals(k) * t), std::sin(-vals(k) * t));
    }
    return vecs * (phase.asDiagonal() * (vecs.adjoint() * psi0));
  }
};

void scenario_rabi(ScenarioContext& ctx) {
  ScenarioReader& r = ctx.reader;
  TransmonSpec tspec = read_transmon(r);
  tspec.n_levels = 3;
  const TransmonModel model = diagonalize_and_truncate(tspec);
  DriveSpec drive;
  drive.amplitude = r.number_or("pulse.omega", 0.01);
  drive.carrier = r.number_or("pulse.carrier", 1.0);
  const double t_final = r.number_or("evolution.t_final", 2.0 * M_PI / drive.amplitude);
  const int n_samples = static_cast<int>(r.number_or("evolution.n_samples", 4096));

  const StaticPropagator prop(rwa_hamiltonian(model, drive));
  CVector psi0 = CVector::Zero(3);
  psi0(0) = 1.0;

  std::string csv = "t,p0,p1,p2,leakage\n";
  for (int i = 0; i <= n_samples; ++i) {
    const double t = t_final * static_cast<double>(i) / n_samples;
    const CVector psi = prop.apply(psi0, t);
    const double p0 = std::norm(psi(0)), p1 = std::norm(psi(1)), p2 = std::norm(psi(2));
    csv += fmt(t) + "," + fmt(p0) + "," + fmt(p1) + "," + fmt(p2) + "," +
           fmt(1.0 - p0 - p1) + "\n";
  }
  ctx.stage.write_file("rabi.csv", csv);
}

void scenario_leakmap(ScenarioContext& ctx) {
  ScenarioReader& r = ctx.reader;
  TransmonSpec tspec = read_transmon(r);
  tspec.n_levels = 3;
  const std::vector<double> omegas = r.numbers("sweep.omega");
  const std::vector<double> ratios = r.numbers("sweep.ej_over_ec");
  const double carrier_note = r.number_or("pulse.carrier", 1.0);
  const int n_samples = static_cast<int>(r.number_or("evolution.n_samples", 4096));
  const double white_threshold = r.number_or("sweep.white_threshold", 0.01);

  struct Row {
    double omega, ratio, alpha, l_max;
  };
  std::vector<Row> rows(omegas.size() * ratios.size());
  parallel_points(rows.size(), ctx.threads, [&](std::size_t idx) {
    const double omega = omegas[idx / ratios.size()];
    const double ratio = ratios[idx % ratios.size()];
    TransmonSpec ts = tspec;
    ts.ej_over_ec = ratio;
    const TransmonModel model = diagonalize_and_truncate(ts);
    DriveSpec drive;
    drive.amplitude = omega;
    drive.carrier = carrier_note;
    const StaticPropagator prop(rwa_hamiltonian(model, drive));
    CVector psi0 = CVector::Zero(3);
    psi0(0) = 1.0;
    const double t_cycle = 2.0 * M_PI / omega;
    double l_max = 0.0;
    for (int i = 0; i <= n_samples; ++i) {
      const double t = t_cycle * static_cast<double>(i) / n_samples;
      const CVector psi = prop.apply(psi0, t);
      l_max = std::max(l_max, 1.0 - std::norm(psi(0)) - std::norm(psi(1)));
    }
    rows[idx] = {omega, ratio, model.anharmonicity, l_max};
  });

  std::string csv = "omega,ej_over_ec,alpha_over_omega01,l_max,white\n";
  for (const Row& row : rows) {
    csv += fmt(row.omega) + "," + fmt(row.ratio) + "," + fmt(row.alpha) + "," +
           fmt(row.l_max) + "," + (row.l_max < white_threshold ? "1" : "0") + "\n";
  }
  ctx.stage.write_file("leakmap.csv", csv);
}

struct GatePoint {
  std::string pulse;
  int n_levels = 0;
  double omega = 0, kappa = 0, t_g = 0, window = 0;
  double fidelity = 0, avg_leakage = 0;
};

GatePoint run_gate_point(const TransmonSpec& tspec_in, const BathSpec& bath_in,
                         const EvolutionSpec& evo_in, PulseKind pulse, int n_levels,
                         double omega, double kappa, double t_g, double t_r_ratio) {
  TransmonSpec tspec = tspec_in;
  tspec.n_levels = n_levels;
  const TransmonModel model = diagonalize_and_truncate(tspec);
  BathSpec bath = bath_in;
  bath.kappa = kappa;

  DriveSpec drive;
  drive.envelope = pulse;
  drive.amplitude = omega;
  drive.carrier = 1.0;
  drive.t_g = t_g;
  drive.t_r = (pulse == PulseKind::simple_not) ? t_r_ratio * t_g : 0.0;

  const PulseProgram program = (pulse == PulseKind::simple_not)
                                   ? simple_not_envelope(drive)
                                   : drag_envelope(model, drive);
  const DriveTerm term = program.drive_term(model);

  EvolutionSpec evo = evo_in;
  evo.method = (kappa > 0) ? evo_in.method : Method::von_neumann;
  evo.t_final = program.window_end;
  evo.save_stride = 1 << 30;  // initial + final only

  const auto initial = cardinal_states(model.dim());
  std::vector<CMatrix> finals(initial.size());
  for (std::size_t j = 0; j < initial.size(); ++j) {
    const Trajectory traj =
        evolve_deterministic(model, bath, &term, initial[j].rho, evo);
    finals[j] = to_rotating_frame(traj.states.back(), drive.carrier,
                                  traj.times.back());
  }
  const GateResult res =
      gate_fidelity(initial, finals, ideal_not(model.dim()), program.window_end);

  GatePoint pt;
  pt.pulse = pulse_name(pulse);
  pt.n_levels = n_levels;
  pt.omega = omega;
  pt.kappa = kappa;
  pt.t_g = t_g;
  pt.window = program.window_end;
  pt.fidelity = res.fidelity;
  pt.avg_leakage = res.avg_leakage;
  return pt;
}

void scenario_gate_sweep(ScenarioContext& ctx) {
  ScenarioReader& r = ctx.reader;
  const TransmonSpec tspec = read_transmon(r);
  BathSpec bath = read_bath(r);
  EvolutionSpec evo;
  evo.method = method_from_string(r.string_or("evolution.method", "redfield"));
  evo.dt = r.number_or("evolution.dt", 0.0125);
  evo.t_final = 1.0;  // set per point

  const PulseKind pulse = pulse_from_string(r.string_or("pulse.pulse", "simple_not"));
  const double t_r_ratio = r.number_or("pulse.t_r_over_t_g", 0.05);
  const std::vector<double> omegas = r.numbers_or("sweep.omega", {0.02});
  const std::vector<double> kappas = r.numbers_or("sweep.kappa", {bath.kappa});
  const std::vector<double> levels = r.numbers_or("sweep.n_levels", {5});
  const std::vector<double> tg_scales = r.numbers_or(
      "sweep.t_g_over_optimal", {0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 1.0, 1.05, 1.1,
                                 1.15, 1.2, 1.25, 1.3});

  struct Index {
    int n;
    double omega, kappa, scale;
  };
  std::vector<Index> grid;
  for (double n : levels)
    for (double om : omegas)
      for (double ka : kappas)
        for (double sc : tg_scales) grid.push_back({static_cast<int>(n), om, ka, sc});

  std::vector<GatePoint> rows(grid.size());
  parallel_points(grid.size(), ctx.threads, [&](std::size_t i) {
    const Index& g = grid[i];
    const double t_g = g.scale * M_PI / g.omega;
    rows[i] = run_gate_point(tspec, bath, evo, pulse, g.n, g.omega, g.kappa, t_g,
                             t_r_ratio);
  });

  std::string csv =
      "pulse,n_levels,omega,kappa,t_g,t_g_prime,fidelity,infidelity,avg_leakage\n";
  for (const GatePoint& p : rows) {
    csv += p.pulse + "," + std::to_string(p.n_levels) + "," + fmt(p.omega) + "," +
           fmt(p.kappa) + "," + fmt(p.t_g) + "," + fmt(p.window) + "," +
           fmt(p.fidelity) + "," + fmt(1.0 - p.fidelity) + "," +
           fmt(p.avg_leakage) + "\n";
  }
  ctx.stage.write_file("gate_sweep.csv", csv);
}

void scenario_drag_sweep(ScenarioContext& ctx) {
  ScenarioReader& r = ctx.reader;
  const TransmonSpec tspec = read_transmon(r);
  BathSpec bath = read_bath(r);
  EvolutionSpec evo;
  evo.method = method_from_string(r.string_or("evolution.method", "redfield"));
  evo.dt = r.number_or("evolution.dt", 0.0125);
  evo.t_final = 1.0;

  const double t_r_ratio = r.number_or("pulse.t_r_over_t_g", 0.05);
  const int n_levels = static_cast<int>(r.number_or("transmon.gate_levels", 5));
  const std::vector<double> omegas =
      r.numbers_or("sweep.omega", {0.005, 0.007, 0.01, 0.014, 0.02});
  const std::vector<double> kappas = r.numbers_or("sweep.kappa", {0.0, 1e-5});
  const std::vector<std::string> pulses =
      r.strings_or("sweep.pulse", {"simple_not", "drag"});

  TransmonSpec ts = tspec;
  ts.n_levels = n_levels;
  const TransmonModel model = diagonalize_and_truncate(ts);
  const double alpha3 = std::pow(std::abs(model.anharmonicity), 3);

  struct Index {
    PulseKind pulse;
    double omega, kappa;
  };
  std::vector<Index> grid;
  for (const std::string& p : pulses)
    for (double om : omegas)
      for (double ka : kappas) grid.push_back({pulse_from_string(p), om, ka});

  std::vector<GatePoint> rows(grid.size());
  parallel_points(grid.size(), ctx.threads, [&](std::size_t i) {
    const Index& g = grid[i];
    const double t_g = M_PI / g.omega;
    rows[i] = run_gate_point(tspec, bath, evo, g.pulse, n_levels, g.omega, g.kappa,
                             t_g, t_r_ratio);
  });

  std::string csv =
      "pulse,omega,kappa,t_g,fidelity,infidelity,avg_leakage,omega4_alpha3\n";
  for (const GatePoint& p : rows) {
    csv += p.pulse + "," + fmt(p.omega) + "," + fmt(p.kappa) + "," + fmt(p.t_g) +
           "," + fmt(p.fidelity) + "," + fmt(1.0 - p.fidelity) + "," +
           fmt(p.avg_leakage) + "," + fmt(std::pow(p.omega, 4) / alpha3) + "\n";
  }
  ctx.stage.write_file("drag_sweep.csv", csv);
}

std::string noise_check_csv(const NoiseCheckConfig& config);

void scenario_noise_check(ScenarioContext& ctx) {
  ScenarioReader& r = ctx.reader;
  NoiseCheckConfig config;
  config.bath = read_bath(r);
  config.n_paths = static_cast<std::size_t>(r.number_or("noise.n_paths", 20000));
  config.dt = r.number_or("noise.dt", 0.01);
  config.t_max = r.number_or("noise.t_max", 10.0);
  config.seed = static_cast<std::uint64_t>(
      r.number_or("noise.master_seed", static_cast<double>(ctx.seed)));
  if (ctx.options.seed_override) config.seed = *ctx.options.seed_override;
  config.threads = ctx.threads;
  ctx.stage.write_file("noise_check.csv", noise_check_csv(config));
}

std::string noise_check_csv(const NoiseCheckConfig& config) {
  const std::size_t n_lags = static_cast<std::size_t>(config.t_max / config.dt);
  const std::size_t n_samples = 2 * n_lags + 1;
  const NoiseSynthesizer synth(config.bath, n_samples, config.dt);

  std::vector<NoisePath> paths(config.n_paths);
  parallel_points(config.n_paths, config.threads, [&](std::size_t i) {
    paths[i] = synth.generate(stream_seed(config.seed, i));
  });

  // Anchor in the middle so both causal and anticausal sides are visible.
  const std::size_t anchor = n_lags;
  const CorrelationEstimate est = estimate_correlations(
      paths, anchor, -static_cast<int>(n_lags), static_cast<int>(n_lags));
  const NoiseContract contract = make_noise_contract(config.bath, n_lags, config.dt);

  std::string csv =
      "lag,xixi_target,xixi_emp,xixi_se,xinu_target_im,xinu_emp_re,xinu_emp_im,"
      "xinu_se,nunu_emp_re,nunu_emp_im,nunu_se\n";
  for (std::size_t i = 0; i < est.xixi.size(); ++i) {
    const double lag = est.lag_time(i);
    const std::size_t abs_lag = static_cast<std::size_t>(std::llabs(
        est.lag_min + static_cast<long>(i)));
    const double target_xx = contract.xixi[abs_lag];
    // Cross target is causal only: i Im C at lag >= 0, zero on the other side.
    const double target_xn_im = (lag >= 0.0) ? contract.xinu[abs_lag].imag() : 0.0;
    csv += fmt(lag) + "," + fmt(target_xx) + "," + fmt(est.xixi[i].real()) + "," +
           fmt(est.xixi_se[i]) + "," + fmt(target_xn_im) + "," +
           fmt(est.xinu[i].real()) + "," + fmt(est.xinu[i].imag()) + "," +
           fmt(est.xinu_se[i]) + "," + fmt(est.nunu[i].real()) + "," +
           fmt(est.nunu[i].imag()) + "," + fmt(est.nunu_se[i]) + "\n";
  }
  return csv;
}

}  // namespace

std::string default_output_dir() {
  if (const char* env = std::getenv("TRANSLEAK_OUT")) return env;
  return "out";
}

void run_noise_check(const NoiseCheckConfig& config) {
  const std::string base = config.out_dir.empty() ? default_output_dir() : config.out_dir;
  OutputStage stage(base, "noise_check");
  NoiseCheckConfig cfg = config;
  cfg.threads = resolve_threads(config.threads);
  const auto t0 = std::chrono::steady_clock::now();
  stage.write_file("noise_check.csv", noise_check_csv(cfg));

  json manifest;
  manifest["scenario"] = "noise_check";
  manifest["version"] = kVersion;
  manifest["master_seed"] = cfg.seed;
  manifest["threads"] = cfg.threads;
  manifest["parameters"] = {{"bath.kappa", cfg.bath.kappa},
                            {"bath.beta", cfg.bath.beta_hbar_omega01},
                            {"bath.cutoff", cfg.bath.cutoff},
                            {"noise.n_paths", cfg.n_paths},
                            {"noise.dt", cfg.dt},
                            {"noise.t_max", cfg.t_max}};
  manifest["outputs"] = stage.files();
  manifest["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  stage.write_file("manifest.json", manifest.dump(2) + "\n");
  stage.commit();
}

void run_scenario(const std::string& toml_path, const RunOptions& options) {
  ScenarioReader reader(parse_toml_file(toml_path));
  const std::string name = reader.require_string("scenario.name");
  const std::string out_base = options.out_override.value_or(
      reader.string_or("scenario.output", default_output_dir()));
  const std::uint64_t seed =
      options.seed_override.value_or(static_cast<std::uint64_t>(
          reader.number_or("scenario.master_seed", 20200609)));

  OutputStage stage(out_base, name);
  ScenarioContext ctx{reader, stage, options, seed, resolve_threads(options.threads)};

  const auto t0 = std::chrono::steady_clock::now();
  if (name == "decay") {
    scenario_decay(ctx);
  } else if (name == "shorttime") {
    scenario_shorttime(ctx);
  } else if (name == "lmax_sweep") {
    scenario_leakage_sweep(ctx, false);
  } else if (name == "tmax_sweep") {
    scenario_leakage_sweep(ctx, true);
  } else if (name == "rabi") {
    scenario_rabi(ctx);
  } else if (name == "leakmap") {
    scenario_leakmap(ctx);
  } else if (name == "gate_sweep") {
    scenario_gate_sweep(ctx);
  } else if (name == "drag_sweep") {
    scenario_drag_sweep(ctx);
  } else if (name == "noise_check") {
    scenario_noise_check(ctx);
  } else {
    throw ConfigError("unknown scenario name '" + name + "'");
  }

  json manifest;
  manifest["scenario"] = name;
  manifest["scenario_file"] = toml_path;
  manifest["version"] = kVersion;
  manifest["master_seed"] = seed;
  manifest["threads"] = ctx.threads;
  manifest["resampled_trajectories"] = ctx.resampled;
  manifest["parameters"] = reader.consumed();
  manifest["outputs"] = stage.files();
  manifest["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  stage.write_file("manifest.json", manifest.dump(2) + "\n");
  stage.commit();
}

}  // namespace transleak
