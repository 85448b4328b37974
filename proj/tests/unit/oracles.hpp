#pragma once

// Independent reference values computed with Boost quadrature and special functions.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>

namespace oracle {

inline double integrate_0_inf(auto g) {
  auto f = [&g](double t) {
    if (t <= 0.0 || !std::isfinite(t)) return 0.0;
    return g(t);
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  boost::math::quadrature::exp_sinh<double> es;
  return ts.integrate(f, 0.0, 1.0) + es.integrate(f, 1.0, std::numeric_limits<double>::infinity());
}

// (-Delta)^{alpha/2} exp(-|x|^2/2) at the origin from the Fourier side:
// (2 pi)^{-n/2} integral |xi|^alpha exp(-|xi|^2/2) d xi.
inline double gaussian_fourier(int n, double alpha) {
  // the integrand is below e^{-800} beyond 40
  boost::math::quadrature::tanh_sinh<double> ts;
  const double p = n == 1 ? alpha : alpha + 1.0;
  const double s = ts.integrate([p](double t) { return std::pow(t, p) * std::exp(-0.5 * t * t); }, 0.0, 40.0);
  return n == 1 ? 2.0 / std::sqrt(2.0 * std::numbers::pi) * s : s;
}

// Same value from the singular integral with constant C: C integral (1 - e^{-|y|^2/2}) |y|^{-n-alpha} dy.
inline double gaussian_singular(int n, double alpha, double C) {
  const double radial =
      integrate_0_inf([alpha](double r) {
        if (r < 1e-5) return 0.5 * std::pow(r, 1.0 - alpha);
        return -std::expm1(-0.5 * r * r) * std::pow(r, -1.0 - alpha);
      });
  return C * (n == 1 ? 2.0 : 2.0 * std::numbers::pi) * radial;
}

// Gamma-function form of C_{n,alpha}, written out independently for cross-checks.
inline double normalization_gamma_form(int n, double alpha) {
  using boost::math::tgamma;
  return std::pow(2.0, alpha) * tgamma(0.5 * (n + alpha)) /
         (std::pow(std::numbers::pi, 0.5 * n) * std::abs(tgamma(-0.5 * alpha)));
}

// C_{1,-alpha} integral |x - y|^{alpha - 1} k(y) dy for k supported in [-rho, rho].
inline double riesz_1d(auto k, double x, double rho, double alpha) {
  using boost::math::tgamma;
  const double c = tgamma(0.5 * (1.0 - alpha)) / (std::pow(2.0, alpha) * std::sqrt(std::numbers::pi) * tgamma(0.5 * alpha));
  boost::math::quadrature::tanh_sinh<double> ts;
  auto f = [&](double y) { return std::pow(std::abs(x - y), alpha - 1.0) * k(y); };
  double s = 0.0;
  if (x <= -rho || x >= rho) {
    s = ts.integrate(f, -rho, rho);
  } else {
    s = ts.integrate(f, -rho, x) + ts.integrate(f, x, rho);
  }
  return c * s;
}

}  // namespace oracle
