#pragma once

#include <array>

#include "fraclap/constants.hpp"
#include "fraclap/exterior.hpp"
#include "fraclap/field.hpp"

namespace fraclap {

/// V_i = sum_j g_alpha(x_i, x_j) k_j h^n with g_alpha = C_{n,-alpha} |x - y|^{alpha - n}.
/// The source's own cell is integrated exactly in polar form.
///
/// Requires dim > alpha, k >= 0 and k = 0 wherever a node coordinate exceeds
/// 0.75 * half_extent in magnitude (compact support inside the box).
Field riesz_convolve(const Field& k, const FracParams& params);

/// Riesz potential of k evaluated at an arbitrary point (inside or outside the grid).
double riesz_potential_at(const Field& k, const FracParams& params, std::array<double, 2> point);

/// Samples the potential of k along the positive first axis on [r_start, r_end]
/// with step dr, continued beyond r_end with the far-field decay |x|^{alpha - n}.
/// Meant for radially symmetric sources, as exterior data for the quadrature operator.
RadialProfile potential_profile(const Field& k, const FracParams& params, double r_start, double r_end, double dr);

/// C^{1,1} cutoff profile: 1 on [0, 1], 1 - smoothstep((r^2 - 1) / 3) on [1, 2], 0 beyond.
/// smoothstep(s) = 3 s^2 - 2 s^3. Radially nonincreasing with bounded second derivative.
double cutoff_profile(double r);

/// xi_R(x) = xi(|x| / R) sampled on the grid.
Field cutoff_field(const Grid& grid, double R);

struct CutoffPotential {
  Field xi;
  Field phi;
  /// sup phi, the empirical bound constant.
  double bound_constant = 0.0;
  /// phi(x) |x|^{n - alpha} over the outer shell 0.85 a <= |x| <= a - h.
  double shell_ratio_min = 0.0;
  double shell_ratio_max = 0.0;
  /// (max - min) / max of the shell ratio.
  double shell_fluctuation = 0.0;
};

/// phi = riesz_convolve(xi_R): the test function solving (-Delta)^{alpha/2} phi = xi_R.
/// Requires R > 1 and 3R <= half_extent (support 2R plus a margin of R).
CutoffPotential cutoff_potential(double R, const FracParams& params, const Grid& grid);

/// Relative discrete L2 distance between A phi and xi_R, with A the quadrature operator
/// whose exterior data is phi's own radial profile beyond the grid.
double cutoff_equation_error(const CutoffPotential& cp, const FracParams& params);

}  // namespace fraclap
