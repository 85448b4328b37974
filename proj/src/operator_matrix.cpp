#include "fraclap/operator_matrix.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>

#include "fraclap/constants.hpp"
#include "fraclap/error.hpp"
#include "fraclap/io.hpp"
#include "fraclap/quadrature.hpp"

namespace fraclap {

namespace {

constexpr int kAngularOrder = 32;
constexpr int kRadialPanels = 40;
constexpr int kRadialOrder = 8;
constexpr int kImageRange1d = 16;
constexpr int kImageRange2d = 4;

struct Ray {
  double weight;  // angular quadrature weight (1 in 1-D)
  double rho;     // distance from the node to the box boundary along the ray
  double ex, ey;  // unit direction
};

// Rays from p to the exterior of the box [lo, hi)^dim, with angular quadrature in 2-D.
// The exterior integral of f(r) r^{-1-alpha} dr over a ray, summed with the ray
// weights, gives the exterior integral of the kernel in polar form.
std::vector<Ray> exterior_rays(int dim, double px, double py, double lo, double hi) {
  std::vector<Ray> rays;
  if (dim == 1) {
    rays.push_back({1.0, hi - px, 1.0, 0.0});
    rays.push_back({1.0, px - lo, -1.0, 0.0});
    return rays;
  }
  const std::array<std::array<double, 2>, 4> corners{{{hi, hi}, {lo, hi}, {lo, lo}, {hi, lo}}};
  std::array<double, 5> angles{};
  for (int k = 0; k < 4; ++k) {
    double a = std::atan2(corners[k][1] - py, corners[k][0] - px);
    if (a < 0.0) a += 2.0 * std::numbers::pi;
    angles[k] = a;
  }
  std::sort(angles.begin(), angles.begin() + 4);
  angles[4] = angles[0] + 2.0 * std::numbers::pi;
  const GaussRule& rule = gauss_legendre(kAngularOrder);
  rays.reserve(4 * kAngularOrder);
  for (int piece = 0; piece < 4; ++piece) {
    const double t0 = angles[piece];
    const double t1 = angles[piece + 1];
    const double mid = 0.5 * (t0 + t1);
    const double half = 0.5 * (t1 - t0);
    for (int q = 0; q < kAngularOrder; ++q) {
      const double th = mid + half * rule.nodes[q];
      const double c = std::cos(th);
      const double s = std::sin(th);
      double rho = std::numeric_limits<double>::infinity();
      if (c > 0.0) rho = std::min(rho, (hi - px) / c);
      if (c < 0.0) rho = std::min(rho, (lo - px) / c);
      if (s > 0.0) rho = std::min(rho, (hi - py) / s);
      if (s < 0.0) rho = std::min(rho, (lo - py) / s);
      rays.push_back({half * rule.weights[q], rho, c, s});
    }
  }
  return rays;
}

// rho^{-alpha}/alpha * integral_0^1 g(|p + rho s^{-1/alpha} e|) ds, which equals
// integral_rho^inf g(|p + r e|) r^{-1-alpha} dr. Geometric panels toward s = 0.
double ray_integral(const Ray& ray, double px, double py, double alpha, const RadialProfile& g) {
  auto integrand = [&](double s) {
    const double r = ray.rho * std::pow(s, -1.0 / alpha);
    return g(std::hypot(px + r * ray.ex, py + r * ray.ey));
  };
  double total = 0.0;
  double upper = 1.0;
  for (int k = 0; k < kRadialPanels; ++k) {
    const double lower = 0.5 * upper;
    total += integrate_gl(integrand, lower, upper, kRadialOrder);
    upper = lower;
  }
  // The remaining [0, 2^-kRadialPanels] panel sees only the far-field continuation.
  total += upper * g(std::numeric_limits<double>::max());
  return std::pow(ray.rho, -alpha) / alpha * total;
}

// sum_{p > P} (c + p L)^{-beta} by Euler-Maclaurin with four Bernoulli corrections.
double image_tail_sum(double c, double L, double beta, int P) {
  const double a = P + 1.0;
  const double z = c + a * L;
  double sum = std::pow(z, 1.0 - beta) / ((beta - 1.0) * L) + 0.5 * std::pow(z, -beta);
  static constexpr std::array<double, 4> kBernoulli{1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0};
  double factorial = 1.0;
  for (int k = 1; k <= 4; ++k) {
    const int order = 2 * k - 1;
    // f^{(order)}(a) = (-1)^order beta (beta+1) ... (beta+order-1) L^order z^{-beta-order}
    double rising = 1.0;
    for (int j = 0; j < order; ++j) rising *= beta + j;
    factorial *= (2.0 * k - 1.0) * (2.0 * k);
    const double derivative = -rising * std::pow(L, order) * std::pow(z, -beta - order);
    sum -= kBernoulli[k - 1] / factorial * derivative;
  }
  return sum;
}

}  // namespace

std::size_t OperatorMatrix::offset_index(std::size_t i, std::size_t j) const {
  const int n = grid_.points_per_axis();
  const bool periodic = grid_.topology() == Topology::periodic;
  auto axis = [&](int a, int b) {
    if (periodic) return static_cast<std::size_t>(((a - b) % n + n) % n);
    return static_cast<std::size_t>(std::abs(a - b));
  };
  const auto pi = grid_.node_indices(i);
  const auto pj = grid_.node_indices(j);
  if (grid_.dim() == 1) return axis(pi[0], pj[0]);
  return axis(pi[0], pj[0]) * n + axis(pi[1], pj[1]);
}

double OperatorMatrix::weight(std::size_t i, std::size_t j) const {
  if (i == j) return 0.0;
  return offset_weights_[offset_index(i, j)];
}

void OperatorMatrix::homogeneous_product(std::span<const double> u, std::span<double> out) const {
  const int n = grid_.points_per_axis();
  const bool periodic = grid_.topology() == Topology::periodic;
  const double* w = offset_weights_.data();
  auto axis = [&](int a, int b) { return periodic ? ((a - b) % n + n) % n : std::abs(a - b); };
  if (grid_.dim() == 1) {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += w[axis(i, j)] * u[j];
      out[i] = diagonal_[i] * u[i] - acc;
    }
    return;
  }
  std::vector<int> col(n);
  for (int i0 = 0; i0 < n; ++i0) {
    for (int i1 = 0; i1 < n; ++i1) {
      for (int j1 = 0; j1 < n; ++j1) col[j1] = axis(i1, j1);
      double acc = 0.0;
      for (int j0 = 0; j0 < n; ++j0) {
        const double* row = w + static_cast<std::size_t>(axis(i0, j0)) * n;
        const double* uj = u.data() + static_cast<std::size_t>(j0) * n;
        for (int j1 = 0; j1 < n; ++j1) acc += row[col[j1]] * uj[j1];
      }
      const std::size_t i = static_cast<std::size_t>(i0) * n + i1;
      out[i] = diagonal_[i] * u[i] - acc;
    }
  }
}

Field OperatorMatrix::apply_impl(const Field& u, std::span<const double> rhs) const {
  require(u.grid() == grid_, "field grid does not match the operator grid");
  const int comps = u.components();
  const std::size_t nodes = size();
  std::vector<double> in(nodes), out(nodes), result(nodes * comps);
  for (int c = 0; c < comps; ++c) {
    for (std::size_t i = 0; i < nodes; ++i) in[i] = u(i, c);
    homogeneous_product(in, out);
    for (std::size_t i = 0; i < nodes; ++i) result[i * comps + c] = out[i] - (rhs.empty() ? 0.0 : rhs[i]);
  }
  return Field(grid_, comps, std::move(result));
}

Field OperatorMatrix::apply(const Field& u) const { return apply_impl(u, exterior_rhs_); }

Field OperatorMatrix::apply_with_exterior(const Field& u, double g) const {
  std::vector<double> rhs(tail_.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = g * tail_[i];
  return apply_impl(u, rhs);
}

Field OperatorMatrix::apply_homogeneous(const Field& u) const { return apply_impl(u, {}); }

double OperatorMatrix::apply_at(const Field& u, std::size_t node) const {
  require(u.grid() == grid_ && u.components() == 1, "apply_at expects a scalar field on the operator grid");
  double acc = 0.0;
  for (std::size_t j = 0; j < size(); ++j) {
    if (j != node) acc += offset_weights_[offset_index(node, j)] * u(j);
  }
  return diagonal_[node] * u(node) - acc - exterior_rhs_[node];
}

Eigen::MatrixXd OperatorMatrix::dense() const {
  std::vector<std::size_t> all(size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return dense(all);
}

Eigen::MatrixXd OperatorMatrix::dense(std::span<const std::size_t> nodes) const {
  const auto m = static_cast<Eigen::Index>(nodes.size());
  Eigen::MatrixXd M(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) {
      M(a, b) = a == b ? diagonal_[nodes[a]] : -weight(nodes[a], nodes[b]);
    }
  }
  return M;
}

void OperatorMatrix::write_dump(const std::string& path) const {
  const Eigen::MatrixXd M = dense();
  std::ostringstream out(std::ios::binary);
  out.write("FRACMAT1", 8);
  const auto rows = static_cast<std::uint32_t>(M.rows());
  out.write(reinterpret_cast<const char*>(&rows), 4);
  out.write(reinterpret_cast<const char*>(&rows), 4);
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    for (Eigen::Index c = 0; c < M.cols(); ++c) {
      const double v = M(r, c);
      out.write(reinterpret_cast<const char*>(&v), 8);
    }
  }
  write_file_atomic(path, out.str());
}

OperatorMatrix build_operator_matrix(const Grid& grid, double alpha, const ExteriorData& exterior) {
  const double C = normalization_constant(grid.dim(), alpha);
  const bool periodic = grid.topology() == Topology::periodic;
  if (periodic) {
    require(exterior.kind() == ExteriorData::Kind::periodic || exterior.kind() == ExteriorData::Kind::zero,
            "a periodic grid's exterior is its own periodic extension; other exterior data need a truncated grid");
  } else {
    require(exterior.kind() != ExteriorData::Kind::periodic,
            "periodic exterior data require a periodic grid");
  }

  OperatorMatrix A(grid, alpha, periodic ? ExteriorData::periodic() : exterior);
  A.c_forward_ = C;
  const int dim = grid.dim();
  const int n = grid.points_per_axis();
  const double h = grid.spacing();
  const double scale = C * std::pow(h, -alpha);  // C h^n / h^{n+alpha}
  const double beta = dim + alpha;
  const double cs = scale * self_cell_lattice_constant(dim, alpha) / (2.0 * dim);
  A.self_cell_weight_ = cs;

  const std::size_t nodes = grid.node_count();
  A.diagonal_.assign(nodes, 0.0);
  A.tail_.assign(nodes, 0.0);
  A.exterior_rhs_.assign(nodes, 0.0);
  auto& w = A.offset_weights_;

  if (dim == 1) {
    w.assign(n, 0.0);
    for (int m = 1; m < n; ++m) {
      if (periodic) {
        const int c = std::min(m, n - m);
        double s = 0.0;
        for (int p = -kImageRange1d; p <= kImageRange1d; ++p) s += std::pow(std::abs(c + p * n), -beta);
        s += image_tail_sum(c, n, beta, kImageRange1d) + image_tail_sum(-c, n, beta, kImageRange1d);
        w[m] = scale * s;
      } else {
        w[m] = scale * std::pow(m, -beta);
      }
    }
    w[1] += cs;
    if (periodic) w[n - 1] += cs;  // offset -1 wraps to n-1
  } else {
    w.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int m0 = 0; m0 < n; ++m0) {
      for (int m1 = 0; m1 < n; ++m1) {
        if (m0 == 0 && m1 == 0) continue;
        double s = 0.0;
        if (periodic) {
          // the symmetric image sum is even in the offset; folding keeps w(m) == w(n - m) exactly
          const int s0 = std::min(m0, n - m0);
          const int s1 = std::min(m1, n - m1);
          for (int p0 = -kImageRange2d; p0 <= kImageRange2d; ++p0) {
            for (int p1 = -kImageRange2d; p1 <= kImageRange2d; ++p1) {
              s += std::pow(std::hypot(s0 + p0 * n, s1 + p1 * n), -beta);
            }
          }
        } else {
          s = std::pow(std::hypot(m0, m1), -beta);
        }
        w[static_cast<std::size_t>(m0) * n + m1] = scale * s;
      }
    }
    if (periodic) {
      // Images beyond the direct range enter through the field mean.
      auto integrand = [alpha](double th) { return std::pow(std::cos(th), alpha); };
      const double far_integral =
          8.0 / alpha * integrate_gl(integrand, 0.0, 0.25 * std::numbers::pi, 32) *
          std::pow(n * (kImageRange2d + 0.5), -alpha);
      const double mean_weight = scale * far_integral / static_cast<double>(nodes);
      for (std::size_t k = 1; k < w.size(); ++k) w[k] += mean_weight;
    }
    w[1] += cs;
    w[static_cast<std::size_t>(n)] += cs;
    if (periodic) {
      w[static_cast<std::size_t>(n) - 1] += cs;
      w[static_cast<std::size_t>(n - 1) * n] += cs;
    }
  }

  if (periodic) {
    // Circulant: every row sums to the same total.
    double total = 0.0;
    for (std::size_t k = 1; k < w.size(); ++k) total += w[k];
    std::fill(A.diagonal_.begin(), A.diagonal_.end(), total);
    return A;
  }

  // Truncated grid: in-grid row sums from prefix sums of the offset table.
  std::vector<double> row_sum(nodes);
  if (dim == 1) {
    std::vector<double> prefix(n);
    double acc = 0.0;
    for (int m = 0; m < n; ++m) prefix[m] = (acc += w[m]);
    for (int i = 0; i < n; ++i) row_sum[i] = prefix[i] + prefix[n - 1 - i];
  } else {
    std::vector<double> F(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a) {
      double line = 0.0;
      for (int b = 0; b < n; ++b) {
        line += w[static_cast<std::size_t>(a) * n + b];
        F[static_cast<std::size_t>(a) * n + b] = line + (a > 0 ? F[static_cast<std::size_t>(a - 1) * n + b] : 0.0);
      }
    }
    auto at = [&](int a, int b) { return F[static_cast<std::size_t>(a) * n + b]; };
    for (int i0 = 0; i0 < n; ++i0) {
      for (int i1 = 0; i1 < n; ++i1) {
        const std::array<int, 2> s0{i0, n - 1 - i0};
        const std::array<int, 2> s1{i1, n - 1 - i1};
        double total = at(0, 0);
        for (int a : s0) {
          for (int b : s1) total += at(a, b);
        }
        for (int a : s0) total -= at(a, 0);
        for (int b : s1) total -= at(0, b);
        row_sum[static_cast<std::size_t>(i0) * n + i1] = total;
      }
    }
  }

  const double lo = -grid.half_extent() - 0.5 * h;
  const double hi = grid.half_extent() - 0.5 * h;
  if (exterior.kind() == ExteriorData::Kind::radial) {
    const RadialProfile& prof = exterior.profile();
    require(prof.samples.size() >= 2, "radial exterior profile needs at least two samples");
    require(prof.dr > 0.0 && prof.dr <= h * (1.0 + 1e-12),
            "radial exterior profile is sampled more coarsely than the grid spacing");
    require(prof.r_start <= hi, "radial exterior profile must start inside the grid box");
    require(prof.decay_exponent >= 0.0, "radial exterior decay exponent must be nonnegative");
  }

  for (std::size_t i = 0; i < nodes; ++i) {
    const auto x = grid.coordinates(i);
    const auto idx = grid.node_indices(i);
    double tail = 0.0;
    double rhs = 0.0;
    for (const Ray& ray : exterior_rays(dim, x[0], x[1], lo, hi)) {
      tail += ray.weight * std::pow(ray.rho, -alpha) / alpha;
      if (exterior.kind() == ExteriorData::Kind::radial) {
        rhs += ray.weight * ray_integral(ray, x[0], x[1], alpha, exterior.profile());
      }
    }
    tail *= C;
    rhs *= C;
    // Nearest neighbours of the central-cell stencil that fall outside the grid.
    for (int axis = 0; axis < dim; ++axis) {
      for (int step : {-1, 1}) {
        const int k = idx[axis] + step;
        if (k >= 0 && k < n) continue;
        tail += cs;
        std::array<double, 2> y = x;
        y[axis] += step * h;
        if (exterior.kind() == ExteriorData::Kind::radial) rhs += cs * exterior.at_radius(std::hypot(y[0], y[1]));
      }
    }
    A.tail_[i] = tail;
    A.diagonal_[i] = row_sum[i] + tail;
    switch (exterior.kind()) {
      case ExteriorData::Kind::zero:
        break;
      case ExteriorData::Kind::constant:
        A.exterior_rhs_[i] = exterior.value() * tail;
        break;
      case ExteriorData::Kind::radial:
        A.exterior_rhs_[i] = rhs;
        break;
      case ExteriorData::Kind::periodic:
        break;
    }
  }
  return A;
}

Field carre_du_champ(const Field& u, const OperatorMatrix& A) {
  require(u.grid() == A.grid(), "field grid does not match the operator grid");
  const ExteriorData::Kind kind = A.exterior().kind();
  require(kind != ExteriorData::Kind::radial, "carre_du_champ supports zero, constant or periodic exterior data");
  const double g = A.exterior().value();
  const std::size_t nodes = u.node_count();
  std::vector<double> out(nodes, 0.0);
  for (int c = 0; c < u.components(); ++c) {
    for (std::size_t i = 0; i < nodes; ++i) {
      const double ui = u(i, c);
      double s = 0.0;
      for (std::size_t j = 0; j < nodes; ++j) {
        if (j == i) continue;
        const double d = ui - u(j, c);
        s += A.weight(i, j) * d * d;
      }
      const double e = ui - g;
      out[i] += s + A.tail()[i] * e * e;
    }
  }
  return Field(u.grid(), 1, std::move(out));
}

}  // namespace fraclap
