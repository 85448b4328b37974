#include "fraclap/potential.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fraclap/error.hpp"
#include "fraclap/operator_matrix.hpp"

namespace fraclap {

namespace {

struct Source {
  double x, y, mass;  // mass = k_j h^n
};

// Weight of the source's own node: the lattice sum of |m h|^{alpha - n} h^n over m != 0
// falls short of the integral by Z(n - alpha) h^alpha, with Z the lattice zeta.
double self_cell_integral(int dim, double alpha, double h) { return -lattice_zeta(dim, dim - alpha) * std::pow(h, alpha); }

void validate_source(const Field& k, const FracParams& params) {
  const Grid& g = k.grid();
  require(params.dim == g.dim(), "FracParams dimension does not match the grid");
  require(params.c_inverse.has_value(),
          "Riesz potential requires dim > alpha (dim " + std::to_string(params.dim) + ", alpha " +
              std::to_string(params.alpha) + ")");
  require(k.components() == 1, "Riesz source must be a scalar field");
  const double limit = 0.75 * g.half_extent();
  for (std::size_t i = 0; i < k.node_count(); ++i) {
    require(k(i) >= 0.0, "Riesz source must be nonnegative (node " + std::to_string(i) + ")");
    if (k(i) == 0.0) continue;
    const auto x = g.coordinates(i);
    require(std::abs(x[0]) <= limit && std::abs(x[1]) <= limit,
            "Riesz source must vanish in the outer quarter of the box (node " + std::to_string(i) + ")");
  }
}

std::vector<Source> sources_of(const Field& k) {
  std::vector<Source> out;
  const double vol = k.grid().cell_volume();
  for (std::size_t i = 0; i < k.node_count(); ++i) {
    if (k(i) == 0.0) continue;
    const auto x = k.grid().coordinates(i);
    out.push_back({x[0], x[1], k(i) * vol});
  }
  return out;
}

double potential_from(const std::vector<Source>& src, const FracParams& params, double self_integral,
                      const Field& k, std::array<double, 2> p) {
  const double expo = params.alpha - params.dim;
  const double c = *params.c_inverse;
  const double h = k.grid().spacing();
  double v = 0.0;
  for (const Source& s : src) {
    const double r = std::hypot(p[0] - s.x, p[1] - s.y);
    if (r < 1e-9 * h) {
      v += s.mass / k.grid().cell_volume() * self_integral;
    } else {
      v += s.mass * std::pow(r, expo);
    }
  }
  return c * v;
}

}  // namespace

Field riesz_convolve(const Field& k, const FracParams& params) {
  validate_source(k, params);
  const Grid& g = k.grid();
  const auto src = sources_of(k);
  const double self = self_cell_integral(g.dim(), params.alpha, g.spacing());
  std::vector<double> v(g.node_count());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = potential_from(src, params, self, k, g.coordinates(i));
  return Field(g, 1, std::move(v));
}

double riesz_potential_at(const Field& k, const FracParams& params, std::array<double, 2> point) {
  validate_source(k, params);
  const double self = self_cell_integral(k.grid().dim(), params.alpha, k.grid().spacing());
  return potential_from(sources_of(k), params, self, k, point);
}

RadialProfile potential_profile(const Field& k, const FracParams& params, double r_start, double r_end, double dr) {
  validate_source(k, params);
  require(dr > 0.0 && r_end > r_start && r_start >= 0.0, "invalid potential profile range");
  const auto src = sources_of(k);
  const double self = self_cell_integral(k.grid().dim(), params.alpha, k.grid().spacing());
  RadialProfile prof;
  prof.r_start = r_start;
  prof.dr = dr;
  prof.decay_exponent = params.dim - params.alpha;
  const auto count = static_cast<std::size_t>(std::ceil((r_end - r_start) / dr)) + 1;
  prof.samples.resize(count);
  for (std::size_t s = 0; s < count; ++s) {
    prof.samples[s] = potential_from(src, params, self, k, {r_start + s * dr, 0.0});
  }
  return prof;
}

double cutoff_profile(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double s = (r * r - 1.0) / 3.0;
  return 1.0 - s * s * (3.0 - 2.0 * s);
}

Field cutoff_field(const Grid& grid, double R) {
  require(R > 0.0, "cutoff scale must be positive");
  return sample(grid, [R](double x, double y) { return cutoff_profile(std::hypot(x, y) / R); });
}

CutoffPotential cutoff_potential(double R, const FracParams& params, const Grid& grid) {
  require(R > 1.0, "cutoff scale R must exceed 1");
  require(3.0 * R <= grid.half_extent(),
          "cutoff support 2R plus a margin of R must fit inside the grid (need 3R <= half_extent)");
  CutoffPotential out{cutoff_field(grid, R), Field(grid)};
  out.phi = riesz_convolve(out.xi, params);
  const auto phi = out.phi.values();
  out.bound_constant = *std::max_element(phi.begin(), phi.end());

  const double a = grid.half_extent();
  const double h = grid.spacing();
  const double expo = grid.dim() - params.alpha;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    const double r = grid.radius(i);
    if (r < 0.85 * a || r > a - h) continue;
    const double ratio = phi[i] * std::pow(r, expo);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  if (hi > 0.0) {
    out.shell_ratio_min = lo;
    out.shell_ratio_max = hi;
    out.shell_fluctuation = (hi - lo) / hi;
  }
  return out;
}

double cutoff_equation_error(const CutoffPotential& cp, const FracParams& params) {
  const Grid& grid = cp.xi.grid();
  const double h = grid.spacing();
  const RadialProfile prof = potential_profile(cp.xi, params, grid.half_extent() - h, 4.0 * grid.half_extent(), 0.5 * h);
  const OperatorMatrix A = build_operator_matrix(grid, params.alpha, ExteriorData::radial(prof));
  const Field Aphi = A.apply(cp.phi);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    const double d = Aphi(i) - cp.xi(i);
    num += d * d;
    den += cp.xi(i) * cp.xi(i);
  }
  return std::sqrt(num / den);
}

}  // namespace fraclap
