#include "fraclap/linear.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fraclap/error.hpp"
#include "fraclap/io.hpp"
#include "fraclap/potential.hpp"

namespace fraclap {

DirichletSolution solve_dirichlet_ball(const OperatorMatrix& A, const Field& k, double R, double exterior_value,
                                       double tolerance) {
  const Grid& grid = A.grid();
  require(grid.topology() == Topology::truncated, "Dirichlet ball solves need a truncated-grid operator");
  require(k.grid() == grid && k.components() == 1, "potential k must be a scalar field on the operator grid");
  require(exterior_value >= 0.0 && std::isfinite(exterior_value), "exterior value must be finite and >= 0");
  require(R > 0.0 && R < grid.half_extent() - 0.5 * grid.spacing(), "ball radius too large for the grid");
  for (double v : k.values()) require(v >= 0.0, "potential k must be nonnegative");

  std::vector<std::size_t> inside;
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    if (grid.radius(i) < R) inside.push_back(i);
  }
  std::vector<double> u(grid.node_count(), exterior_value);
  DirichletSolution out{Field(grid), 0.0, inside.size()};
  if (inside.empty()) {
    out.u = Field(grid, 1, std::move(u));
    return out;
  }

  Eigen::MatrixXd M = A.dense(inside);
  // Row sums of the pure operator block give the exterior coupling: every node
  // outside the ball, and the grid's exterior, carries exterior_value.
  const Eigen::VectorXd rhs = exterior_value * M.rowwise().sum();
  for (std::size_t a = 0; a < inside.size(); ++a) M(a, a) += k(inside[a]);

  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("Dirichlet system is not positive definite (broken M-matrix structure)");
  }
  Eigen::VectorXd sol = llt.solve(rhs);
  Eigen::VectorXd r = M * sol - rhs;
  sol -= llt.solve(r);  // one step of iterative refinement
  r = M * sol - rhs;
  const double scale = std::max(1.0, rhs.lpNorm<Eigen::Infinity>());
  out.residual = r.lpNorm<Eigen::Infinity>() / scale;
  if (!(out.residual <= tolerance)) {
    throw NumericalError("Dirichlet solve residual " + format_exact(out.residual) + " exceeds tolerance");
  }
  for (std::size_t a = 0; a < inside.size(); ++a) u[inside[a]] = sol[static_cast<Eigen::Index>(a)];
  out.u = Field(grid, 1, std::move(u));
  return out;
}

Field solve_dirichlet_ball(const Field& k, double R, const FracParams& params, double exterior_value,
                           double tolerance) {
  require(params.dim == k.grid().dim(), "FracParams dimension does not match the grid");
  const OperatorMatrix A = build_operator_matrix(k.grid(), params.alpha, ExteriorData::constant(exterior_value));
  return solve_dirichlet_ball(A, k, R, exterior_value, tolerance).u;
}

void validate(const ExhaustionConfig& cfg) {
  const Grid& grid = cfg.k.grid();
  require(grid.topology() == Topology::truncated, "ball exhaustion needs a truncated grid");
  require(cfg.params.dim == grid.dim(), "FracParams dimension does not match the grid");
  require(cfg.params.c_inverse.has_value(), "ball exhaustion compares against the Riesz potential: need dim > alpha");
  require(!cfg.radii.empty(), "ball exhaustion needs at least one radius");
  require(cfg.tolerance > 0.0, "solver tolerance must be positive");
  for (std::size_t j = 0; j < cfg.radii.size(); ++j) {
    require(cfg.radii[j] > 0.0, "radii must be positive");
    if (j > 0) require(cfg.radii[j] > cfg.radii[j - 1], "radii must increase strictly");
  }
  require(2.0 * cfg.radii.back() < grid.half_extent(), "2 R_J must lie inside the grid");
  const double h = grid.spacing();
  for (double R : cfg.radii) {
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
      require(std::abs(grid.radius(i) - R) > 1e-9 * h,
              "radius " + format_exact(R) + " coincides with a node distance; pick a radius between nodes");
    }
  }
  require(cfg.k.components() == 1, "k must be scalar");
  for (double v : cfg.k.values()) require(v >= 0.0, "k must be nonnegative");
}

ExhaustionResult run_exhaustion(const ExhaustionConfig& cfg) {
  validate(cfg);
  const Grid& grid = cfg.k.grid();
  const OperatorMatrix A = build_operator_matrix(grid, cfg.params.alpha, ExteriorData::constant(1.0));
  ExhaustionResult res{.limit = Field(grid), .potential = Field(grid)};
  res.radii = cfg.radii;
  res.nontrivial_source = std::any_of(cfg.k.values().begin(), cfg.k.values().end(), [](double v) { return v > 0; });

  constexpr double kBoundSlack = 1e-10;
  for (std::size_t j = 0; j < cfg.radii.size(); ++j) {
    DirichletSolution s = solve_dirichlet_ball(A, cfg.k, cfg.radii[j], 1.0, cfg.tolerance);
    const auto v = s.u.values();
    const double lo = *std::min_element(v.begin(), v.end());
    const double hi = *std::max_element(v.begin(), v.end());
    if (lo < -kBoundSlack || hi > 1.0 + kBoundSlack) {
      throw NumericalError("maximum principle violated at radius " + format_exact(cfg.radii[j]) + ": range [" +
                           format_exact(lo) + ", " + format_exact(hi) + "]");
    }
    double gap = 0.0;
    if (j > 0) {
      const auto prev = res.solutions.back().values();
      for (std::size_t i = 0; i < v.size(); ++i) gap = std::max(gap, v[i] - prev[i]);
    }
    res.min_u.push_back(lo);
    res.sup_u.push_back(hi);
    res.monotonicity_gaps.push_back(gap);
    res.residuals.push_back(s.residual);
    res.monotonicity_residual = std::max(res.monotonicity_residual, gap);
    res.solutions.push_back(std::move(s.u));
  }
  if (res.monotonicity_residual > kBoundSlack) {
    throw NumericalError("monotone non-increase in the radius violated by " + format_exact(res.monotonicity_residual));
  }

  res.limit = res.solutions.back();
  if (res.solutions.size() > 1) {
    const auto a = res.solutions[res.solutions.size() - 2].values();
    const auto b = res.limit.values();
    for (std::size_t i = 0; i < a.size(); ++i) res.cauchy_gap = std::max(res.cauchy_gap, std::abs(b[i] - a[i]));
  }

  res.potential = riesz_convolve(cfg.k, cfg.params);
  const auto U = res.limit.values();
  const auto V = res.potential.values();
  for (std::size_t i = 0; i < U.size(); ++i) {
    res.comparison_residual = std::max(res.comparison_residual, 1.0 - U[i] - V[i]);
    res.nontriviality = std::max(res.nontriviality, U[i]);
    res.potential_peak = std::max(res.potential_peak, V[i]);
    if (grid.radius(i) >= 0.85 * grid.half_extent()) res.potential_outer_max = std::max(res.potential_outer_max, V[i]);
  }
  res.comparison_residual = std::max(res.comparison_residual, 0.0);
  if (res.comparison_residual > 1e-8) {
    throw NumericalError("comparison 1 - U <= V violated by " + format_exact(res.comparison_residual));
  }
  return res;
}

std::string format_exhaustion_report(const ExhaustionResult& result) {
  std::ostringstream out;
  out << "# R sup_u min_u monotonicity_gap residual\n";
  for (std::size_t j = 0; j < result.radii.size(); ++j) {
    out << format_exact(result.radii[j]) << ' ' << format_exact(result.sup_u[j]) << ' ' << format_exact(result.min_u[j])
        << ' ' << format_exact(result.monotonicity_gaps[j]) << ' ' << format_exact(result.residuals[j]) << '\n';
  }
  out << "cauchy_gap " << format_exact(result.cauchy_gap) << '\n';
  out << "comparison_residual " << format_exact(result.comparison_residual) << '\n';
  out << "sup_U " << format_exact(result.nontriviality) << '\n';
  out << "potential_peak " << format_exact(result.potential_peak) << '\n';
  out << "potential_outer_max " << format_exact(result.potential_outer_max) << '\n';
  return out.str();
}

}  // namespace fraclap
