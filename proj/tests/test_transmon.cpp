#include <doctest.h>

#include <cmath>

#include "transleak/errors.hpp"
#include "transleak/transmon.hpp"

using namespace transleak;

namespace {

TransmonSpec spec_at(double ratio, int n_levels = 5, double n_g = 0.0) {
  TransmonSpec s;
  s.ej_over_ec = ratio;
  s.n_g = n_g;
  s.n_levels = n_levels;
  s.charge_cutoff = 15;
  return s;
}

}  // namespace

TEST_CASE("charge hamiltonian structure") {
  TransmonSpec s = spec_at(100.0);
  const RMatrix h = build_charge_hamiltonian(s);
  const int dim = 2 * s.charge_cutoff + 1;
  REQUIRE(h.rows() == dim);
  CHECK(h(0, 0) == doctest::Approx(4.0 * 15.0 * 15.0));
  CHECK(h(15, 15) == doctest::Approx(0.0));
  CHECK(h(3, 4) == doctest::Approx(-50.0));
  CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == doctest::Approx(0.0));

  // E_J = 0 decouples the charge states.
  TransmonSpec free_spec = s;
  free_spec.ej_over_ec = 1e-300;
  const RMatrix h0 = build_charge_hamiltonian(free_spec);
  for (int n = -s.charge_cutoff; n <= s.charge_cutoff; ++n) {
    CHECK(h0(n + 15, n + 15) == doctest::Approx(4.0 * n * n));
  }
}

TEST_CASE("lowest gap approaches the transmon asymptote") {
  const TransmonModel m = diagonalize_and_truncate(spec_at(100.0));
  // sqrt(8 E_J E_C) - E_C in units of E_C
  CHECK(m.omega01_ec == doctest::Approx(std::sqrt(800.0) - 1.0).epsilon(2e-3));
  CHECK(m.omega[0] == 0.0);
  CHECK(m.omega[1] == doctest::Approx(1.0));
}

TEST_CASE("offset-charge dispersion is suppressed at EJ/EC = 100") {
  const TransmonModel a = diagonalize_and_truncate(spec_at(100.0, 5, 0.0));
  const TransmonModel b = diagonalize_and_truncate(spec_at(100.0, 5, 0.5));
  CHECK(std::abs(b.omega01_ec - a.omega01_ec) / a.omega01_ec < 1e-6);
}

TEST_CASE("ladder matrix element ratio is close to sqrt(2)") {
  const TransmonModel m = diagonalize_and_truncate(spec_at(100.0, 3));
  CHECK(m.q_op(1, 2) / m.q_op(0, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(0.03));
}

TEST_CASE("relative anharmonicity at EJ/EC = 100") {
  const TransmonModel m = diagonalize_and_truncate(spec_at(100.0));
  CHECK(m.anharmonicity == doctest::Approx(-0.037).epsilon(0.03));
  CHECK(m.anharmonicity < 0.0);
}

TEST_CASE("diagonal charge elements vanish at n_g = 0") {
  const TransmonModel m = diagonalize_and_truncate(spec_at(100.0));
  for (int k = 0; k < m.dim(); ++k) {
    CHECK(std::abs(m.q_op(k, k)) < 1e-10);
  }
}

TEST_CASE("gauge fixing and hermiticity") {
  for (double ratio : {25.0, 100.0, 400.0}) {
    for (double ng : {0.0, 0.3}) {
      const TransmonModel m = diagonalize_and_truncate(spec_at(ratio, 5, ng));
      for (int k = 0; k + 1 < m.dim(); ++k) CHECK(m.q_op(k, k + 1) > 0.0);
      CHECK((m.q_op - m.q_op.transpose()).cwiseAbs().maxCoeff() < 1e-12);
      const CMatrix p = conjugate_operator(m);
      CHECK(hermiticity_defect(p) < 1e-12);
      for (int k = 0; k < m.dim(); ++k) CHECK(std::abs(p(k, k)) == 0.0);
    }
  }
}

TEST_CASE("eigenfrequency convergence in the charge cutoff") {
  TransmonSpec s = spec_at(100.0);
  const TransmonModel base = diagonalize_and_truncate(s);
  s.charge_cutoff = 30;
  const TransmonModel wide = diagonalize_and_truncate(s);
  for (int k = 0; k < 5; ++k) {
    const double scale = std::max(base.omega[k], 1.0);
    CHECK(std::abs(base.omega[k] - wide.omega[k]) / scale < 1e-9);
  }
}

TEST_CASE("conjugate operator matches i[H,q]") {
  const TransmonModel m = diagonalize_and_truncate(spec_at(100.0, 4));
  const CMatrix p = conjugate_operator(m);
  const CMatrix h = m.hamiltonian();
  const CMatrix expect = I * (h * m.q_op.cast<Complex>() - m.q_op.cast<Complex>() * h);
  CHECK((p - expect).cwiseAbs().maxCoeff() < 1e-12);
  // Two-level block: p is sigma_y-like when q is sigma_x-like.
  CHECK(p(0, 1).real() == doctest::Approx(0.0));
  CHECK(p(0, 1).imag() == doctest::Approx(-m.q_op(0, 1)));
}

TEST_CASE("transmon-limit trend: |alpha|/omega01 falls with EJ/EC") {
  double prev = 1e9;
  for (double ratio : {25.0, 50.0, 100.0, 200.0, 400.0}) {
    const TransmonModel m = diagonalize_and_truncate(spec_at(ratio, 3));
    const double cur = std::abs(m.anharmonicity);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("invalid specs are rejected") {
  TransmonSpec s = spec_at(100.0);
  s.n_levels = 1;
  CHECK_THROWS_AS(diagonalize_and_truncate(s), ConfigError);
  s = spec_at(100.0);
  s.charge_cutoff = 7;
  CHECK_THROWS_AS(diagonalize_and_truncate(s), ConfigError);
  s = spec_at(-2.0);
  CHECK_THROWS_AS(build_charge_hamiltonian(s), ConfigError);
}
