#pragma once

#include <optional>

namespace fraclap {

/// C_{n,alpha}: the constant for which C * p.v. integral (u(x) - u(y)) / |x - y|^{n+alpha} dy
/// has Fourier symbol |xi|^alpha. Closed form 2^a Gamma((n+a)/2) / (pi^{n/2} |Gamma(-a/2)|).
double normalization_constant(int dim, double alpha);

/// C_{n,-alpha}: the Riesz-kernel constant, g(x, y) = C_{n,-alpha} |x - y|^{alpha - n}.
/// Defined only for dim > alpha.
double riesz_constant(int dim, double alpha);

/// Order of the operator plus its normalization constants.
struct FracParams {
  double alpha = 1.0;
  int dim = 1;
  double c_forward = 0.0;
  /// Present iff dim > alpha.
  std::optional<double> c_inverse;
};

FracParams make_frac_params(int dim, double alpha);

/// Dirichlet beta function sum_{k>=0} (-1)^k (2k+1)^{-s} for s > 0.
double dirichlet_beta(double s);

/// Epstein zeta of the integer lattice, sum over nonzero m in Z^dim of |m|^{-s}, analytically
/// continued: 2 zeta(s) in 1-D, 4 zeta(s/2) beta(s/2) in 2-D (s > 0 there).
double lattice_zeta(int dim, double s);

/// Lattice constant K such that the singular self-cell contribution to the
/// operator at node x is -(C / (2 dim)) * K * h^{2-alpha} * Laplacian(u)(x).
///
/// K = lim_M [ integral over the box of side 2M+1 of |y|^{-alpha}... ] minus the
/// matching lattice sum, i.e. -2 zeta(alpha - 1) in 1-D and -4 zeta(alpha/2) beta(alpha/2)
/// in 2-D. With this K the midpoint lattice rule integrates quadratics exactly.
double self_cell_lattice_constant(int dim, double alpha);

}  // namespace fraclap
