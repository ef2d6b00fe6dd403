#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <string>

#include "transleak/errors.hpp"

namespace transleak {

// Adaptive Gauss-Kronrod (15-point rule) on a finite interval.
//
// Tolerance semantics: relative to max(|result|, abs_scale). Spectral
// integrals here cancel to ~1e-6 of the integrand scale at large times,
// where a purely relative criterion cannot be met in doubles; callers pass
// the t=0 scale of the integral as abs_scale.
template <typename F>
double integrate_gk(F&& f, double a, double b, double rel_tol,
                    double abs_scale, const char* what) {
  double err = 0.0;
  const double val = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, /*max_depth=*/18, /*tol=*/rel_tol, &err);
  const double scale = std::max(std::abs(val), abs_scale);
  if (!(err <= 10.0 * rel_tol * scale) || !std::isfinite(val)) {
    throw QuadratureError(std::string(what) + ": estimated error " +
                          std::to_string(err) + " exceeds tolerance at scale " +
                          std::to_string(scale));
  }
  return val;
}

}  // namespace transleak
