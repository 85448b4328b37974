#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fraclap/grid.hpp"

namespace fraclap {

/// Real or vector-valued samples on a Grid.
///
/// Values are stored node-major with components interleaved:
/// values[node * components + c]. Every value is finite; construction rejects
/// NaN or Inf with NumericalError.
class Field {
 public:
  Field(Grid grid, int components, std::vector<double> values);
  /// Zero field.
  Field(Grid grid, int components = 1);

  const Grid& grid() const { return grid_; }
  int components() const { return components_; }
  std::size_t node_count() const { return grid_.node_count(); }
  std::span<const double> values() const { return values_; }
  double operator()(std::size_t node, int component = 0) const {
    return values_[node * components_ + component];
  }
  /// Euclidean norm across components at one node.
  double magnitude(std::size_t node) const;
  /// Extracts one component as a scalar field.
  Field component(int c) const;

  bool operator==(const Field& other) const = default;

 private:
  Grid grid_;
  int components_;
  std::vector<double> values_;
};

/// Builds a field by evaluating fn(x, y) at each node (y = 0 in 1-D).
template <class Fn>
Field sample(const Grid& grid, Fn&& fn) {
  std::vector<double> v(grid.node_count());
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto x = grid.coordinates(i);
    v[i] = fn(x[0], x[1]);
  }
  return Field(grid, 1, std::move(v));
}

/// Stacks scalar fields on the same grid into one vector-valued field.
Field stack_components(std::span<const Field> parts);

struct FieldNorms {
  double sup_norm = 0.0;
  double lq_norm = 0.0;
};

/// Sup norm over nodes and components and the grid-weighted q-norm
/// h^{n/q} (sum |f_i|^q)^{1/q}.
FieldNorms field_norms(const Field& f, double q = 2.0);

struct TailDiagnostic {
  /// Midpoint rule for the integral of |u| / (1 + |x|^{n+alpha}) over the box.
  double l_alpha_integral = 0.0;
  /// Midpoint rule for the integral of (1 - |u|^2)^2 over the box.
  double gl_energy = 0.0;
};

TailDiagnostic tail_diagnostics(const Field& u, double alpha);

/// Discrete integral of (1 - |u|^2)^2; nodes with ||u|^2 - 1| <= 1e-15 contribute zero.
double gl_energy(const Field& u);

// Field file format, little-endian:
//   "FRACFLD1" | dim u32 | points_per_axis u32 | components u32 |
//   topology u8 (0 periodic, 1 truncated) | half_extent f64 | values f64...
void write_field(std::ostream& out, const Field& f);
Field read_field(std::istream& in);
void write_field_file(const std::string& path, const Field& f);
Field read_field_file(const std::string& path);

}  // namespace fraclap
