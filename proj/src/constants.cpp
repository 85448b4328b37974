#include "fraclap/constants.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fraclap/error.hpp"

namespace fraclap {

namespace {

void check_order(int dim, double alpha) {
  require(dim == 1 || dim == 2, "dimension must be 1 or 2");
  require(alpha > 0.0 && alpha < 2.0, "alpha must lie strictly inside (0, 2), got " + std::to_string(alpha));
}

}  // namespace

double normalization_constant(int dim, double alpha) {
  check_order(dim, alpha);
  const double n = dim;
  return std::pow(2.0, alpha) * std::tgamma(0.5 * (n + alpha)) /
         (std::pow(std::numbers::pi, 0.5 * n) * std::abs(std::tgamma(-0.5 * alpha)));
}

double riesz_constant(int dim, double alpha) {
  check_order(dim, alpha);
  require(dim > alpha, "Riesz potential requires dim > alpha (got dim " + std::to_string(dim) + ", alpha " +
                           std::to_string(alpha) + ")");
  const double n = dim;
  return std::tgamma(0.5 * (n - alpha)) /
         (std::pow(2.0, alpha) * std::pow(std::numbers::pi, 0.5 * n) * std::tgamma(0.5 * alpha));
}

FracParams make_frac_params(int dim, double alpha) {
  FracParams p;
  p.alpha = alpha;
  p.dim = dim;
  p.c_forward = normalization_constant(dim, alpha);
  if (dim > alpha) p.c_inverse = riesz_constant(dim, alpha);
  return p;
}

double dirichlet_beta(double s) {
  require(s > 0.0, "dirichlet_beta requires s > 0");
  // Cohen-Rodriguez Villegas-Zagier acceleration of the alternating series.
  constexpr int n = 40;
  double d = std::pow(3.0 + std::sqrt(8.0), n);
  d = 0.5 * (d + 1.0 / d);
  double b = -1.0;
  double c = -d;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    c = b - c;
    sum += c * std::pow(2.0 * k + 1.0, -s);
    b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0));
  }
  return sum / d;
}

double lattice_zeta(int dim, double s) {
  if (dim == 1) {
    require(s != 1.0, "lattice_zeta(1, s) has a pole at s = 1");
    return 2.0 * std::riemann_zeta(s);
  }
  require(dim == 2, "lattice_zeta supports dimension 1 or 2");
  require(s > 0.0 && s != 2.0, "lattice_zeta(2, s) needs s > 0 and s != 2");
  return 4.0 * std::riemann_zeta(0.5 * s) * dirichlet_beta(0.5 * s);
}

double self_cell_lattice_constant(int dim, double alpha) {
  check_order(dim, alpha);
  return -lattice_zeta(dim, dim + alpha - 2.0);
}

}  // namespace fraclap
