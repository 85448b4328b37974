#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace fraclap {

enum class Topology : std::uint8_t { periodic = 0, truncated = 1 };

/// Uniform lattice on the centered box [-half_extent, half_extent)^dim.
///
/// Node coordinates along each axis are x_i = -half_extent + i * spacing for
/// i = 0..points_per_axis-1. Nodes are indexed lexicographically with the first
/// axis slowest: node = i0 * points_per_axis + i1 in 2-D.
class Grid {
 public:
  Grid(int dim, double half_extent, int points_per_axis, Topology topology);

  int dim() const { return dim_; }
  double half_extent() const { return half_extent_; }
  int points_per_axis() const { return n_; }
  Topology topology() const { return topology_; }
  double spacing() const { return 2.0 * half_extent_ / n_; }
  /// h^dim, the measure of one cell.
  double cell_volume() const;
  std::size_t node_count() const;

  double axis_coordinate(int i) const { return -half_extent_ + i * spacing(); }
  std::array<int, 2> node_indices(std::size_t node) const;
  std::size_t node_of(int i0, int i1 = 0) const;
  /// Coordinates of a node; unused trailing entries are zero.
  std::array<double, 2> coordinates(std::size_t node) const;
  double radius(std::size_t node) const;

  bool operator==(const Grid& other) const = default;

 private:
  int dim_;
  double half_extent_;
  int n_;
  Topology topology_;
};

Grid make_grid(int dim, double half_extent, int points_per_axis, Topology topology);

const char* to_string(Topology topology);
Topology topology_from_string(const char* name);

}  // namespace fraclap
