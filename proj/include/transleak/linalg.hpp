#pragma once

#include <Eigen/Dense>
#include <complex>

namespace transleak {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr Complex I{0.0, 1.0};

inline CMatrix commutator(const CMatrix& a, const CMatrix& b) {
  return a * b - b * a;
}

inline CMatrix anticommutator(const CMatrix& a, const CMatrix& b) {
  return a * b + b * a;
}

inline double hermiticity_defect(const CMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// ρ <- (ρ + ρ†)/2, removes secular accumulation of rounding asymmetry.
inline void symmetrize(CMatrix& rho) {
  rho = 0.5 * (rho + rho.adjoint()).eval();
}

inline double min_eigenvalue(const CMatrix& herm) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// Trace distance (1/2)||a - b||_1 for Hermitian a, b.
inline double trace_distance(const CMatrix& a, const CMatrix& b) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a - b, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace transleak
