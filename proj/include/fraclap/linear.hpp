#pragma once

#include <string>
#include <vector>

#include "fraclap/constants.hpp"
#include "fraclap/field.hpp"
#include "fraclap/operator_matrix.hpp"

namespace fraclap {

struct DirichletSolution {
  Field u;
  /// ||M u - b||_inf / max(1, ||b||_inf) of the reduced system.
  double residual = 0.0;
  std::size_t unknowns = 0;
};

/// Solves (A + diag k) u = 0 on the nodes with |x| < R, with u = exterior_value
/// on every other node and on the grid's exterior continuation. A must be a
/// truncated-grid operator; its tail weights carry the exterior contribution.
/// Dense Cholesky factorization of the reduced M-matrix.
DirichletSolution solve_dirichlet_ball(const OperatorMatrix& A, const Field& k, double R, double exterior_value,
                                       double tolerance = 1e-12);

/// Convenience overload that assembles the operator for k's grid.
Field solve_dirichlet_ball(const Field& k, double R, const FracParams& params, double exterior_value,
                           double tolerance = 1e-12);

struct ExhaustionConfig {
  std::vector<double> radii;
  Field k;
  FracParams params;
  double tolerance = 1e-12;
};

/// Throws ValidationError unless the radii increase strictly, avoid node
/// distances, satisfy 2 R_J < half_extent, and k >= 0 with dim > alpha.
void validate(const ExhaustionConfig& cfg);

struct ExhaustionResult {
  std::vector<double> radii;
  std::vector<Field> solutions;
  std::vector<double> sup_u;
  std::vector<double> min_u;
  /// max_i (u_j - u_{j-1})_+ for each radius (0 for the first).
  std::vector<double> monotonicity_gaps;
  std::vector<double> residuals;
  Field limit;
  /// max |u_J - u_{J-1}|.
  double cauchy_gap = 0.0;
  Field potential;
  double monotonicity_residual = 0.0;
  /// max_i (1 - U_i - V_i)_+.
  double comparison_residual = 0.0;
  /// sup U.
  double nontriviality = 0.0;
  bool nontrivial_source = false;
  /// V at its maximum versus the largest V on the outer shell |x| >= 0.85 a.
  double potential_peak = 0.0;
  double potential_outer_max = 0.0;
};

/// Solves on each ball, checks the maximum principle and pointwise monotone
/// non-increase in the radius, computes V = riesz_convolve(k) and checks 1 - U <= V.
/// Violations beyond 1e-10 (bounds, monotonicity) or 1e-8 (comparison) throw NumericalError.
ExhaustionResult run_exhaustion(const ExhaustionConfig& cfg);

/// Column text: one row per radius (R, sup u, min u, monotonicity gap, residual),
/// then cauchy_gap, comparison_residual, sup_U and potential summary lines.
std::string format_exhaustion_report(const ExhaustionResult& result);

}  // namespace fraclap
