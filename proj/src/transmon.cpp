#include "transleak/transmon.hpp"

#include <cmath>
#include <string>

#include "transleak/errors.hpp"

namespace transleak {

void TransmonSpec::validate() const {
  if (!(ej_over_ec > 0)) throw ConfigError("transmon: ej_over_ec must be > 0");
  if (n_levels < 2) throw ConfigError("transmon: n_levels must be >= 2");
  if (charge_cutoff < n_levels + 5) {
    throw ConfigError("transmon: charge_cutoff must be >= n_levels + 5, got " +
                      std::to_string(charge_cutoff));
  }
}

CMatrix TransmonModel::hamiltonian() const {
  const int n = dim();
  CMatrix h = CMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) h(k, k) = omega[k];
  return h;
}

RMatrix build_charge_hamiltonian(const TransmonSpec& spec) {
  spec.validate();
  const int nc = spec.charge_cutoff;
  const int dim = 2 * nc + 1;
  RMatrix h = RMatrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const double n = static_cast<double>(i - nc);
    h(i, i) = 4.0 * (n - spec.n_g) * (n - spec.n_g);
    if (i + 1 < dim) {
      h(i, i + 1) = -0.5 * spec.ej_over_ec;
      h(i + 1, i) = -0.5 * spec.ej_over_ec;
    }
  }
  return h;
}

namespace {

struct EigenPairs {
  RVector energies;  // lowest n_levels, in E_C units
  RMatrix q;         // ⟨k|n̂|l⟩ on the truncated space, gauge-fixed
};

EigenPairs solve_truncated(const TransmonSpec& spec, int charge_cutoff) {
  TransmonSpec s = spec;
  s.charge_cutoff = charge_cutoff;
  const RMatrix h = build_charge_hamiltonian(s);
  Eigen::SelfAdjointEigenSolver<RMatrix> es(h);
  if (es.info() != Eigen::Success) {
    throw ConvergenceError("transmon: eigensolver failed");
  }

  const int n = spec.n_levels;
  const int nc = charge_cutoff;
  RMatrix vecs = es.eigenvectors().leftCols(n);

  // Gauge: real eigenvectors with q_{k,k+1} > 0, fixed sequentially.
  RVector charge = RVector::Zero(2 * nc + 1);
  for (int i = 0; i < 2 * nc + 1; ++i) charge[i] = static_cast<double>(i - nc);
  for (int k = 0; k + 1 < n; ++k) {
    const double overlap =
        vecs.col(k).dot(charge.asDiagonal() * vecs.col(k + 1));
    if (overlap < 0) vecs.col(k + 1) *= -1.0;
  }

  EigenPairs out;
  out.energies = es.eigenvalues().head(n);
  out.q = vecs.transpose() * charge.asDiagonal() * vecs;
  return out;
}

}  // namespace

TransmonModel diagonalize_and_truncate(const TransmonSpec& spec) {
  spec.validate();
  const EigenPairs base = solve_truncated(spec, spec.charge_cutoff);
  const EigenPairs wide = solve_truncated(spec, spec.charge_cutoff + 5);

  const double gap = base.energies[1] - base.energies[0];
  for (int k = 0; k < spec.n_levels; ++k) {
    const double scale = std::max(std::abs(base.energies[k] - base.energies[0]), gap);
    const double drift = std::abs((base.energies[k] - base.energies[0]) -
                                  (wide.energies[k] - wide.energies[0]));
    if (drift > 1e-9 * scale) {
      throw ConvergenceError(
          "transmon: eigenfrequency " + std::to_string(k) +
          " not converged at charge_cutoff = " + std::to_string(spec.charge_cutoff));
    }
  }

  TransmonModel model;
  model.omega01_ec = gap;
  model.omega = (base.energies.array() - base.energies[0]) / gap;
  model.omega01 = 1.0;
  model.q_op = base.q;
  if (spec.n_levels >= 3) {
    model.anharmonicity = (model.omega[2] - model.omega[1]) - 1.0;
  } else {
    model.anharmonicity = 0.0;
  }
  return model;
}

CMatrix conjugate_operator(const TransmonModel& model) {
  const int n = model.dim();
  CMatrix p = CMatrix::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      p(a, b) = I * (model.omega[a] - model.omega[b]) * model.q_op(a, b);
    }
  }
  return p;
}

}  // namespace transleak
