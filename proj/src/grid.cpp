#include "fraclap/grid.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "fraclap/error.hpp"

namespace fraclap {

Grid::Grid(int dim, double half_extent, int points_per_axis, Topology topology)
    : dim_(dim), half_extent_(half_extent), n_(points_per_axis), topology_(topology) {
  require(dim == 1 || dim == 2, "grid dimension must be 1 or 2, got " + std::to_string(dim));
  require(std::isfinite(half_extent) && half_extent > 0.0, "half_extent must be positive and finite");
  require(points_per_axis >= 4, "points_per_axis must be at least 4, got " + std::to_string(points_per_axis));
  require(points_per_axis % 2 == 0,
          "points_per_axis must be even (spectral symmetry), got " + std::to_string(points_per_axis));
  require(topology == Topology::periodic || topology == Topology::truncated, "unknown topology");
}

double Grid::cell_volume() const {
  const double h = spacing();
  return dim_ == 1 ? h : h * h;
}

std::size_t Grid::node_count() const {
  const auto n = static_cast<std::size_t>(n_);
  return dim_ == 1 ? n : n * n;
}

std::array<int, 2> Grid::node_indices(std::size_t node) const {
  if (dim_ == 1) return {static_cast<int>(node), 0};
  return {static_cast<int>(node / n_), static_cast<int>(node % n_)};
}

std::size_t Grid::node_of(int i0, int i1) const {
  if (dim_ == 1) return static_cast<std::size_t>(i0);
  return static_cast<std::size_t>(i0) * n_ + static_cast<std::size_t>(i1);
}

std::array<double, 2> Grid::coordinates(std::size_t node) const {
  auto idx = node_indices(node);
  if (dim_ == 1) return {axis_coordinate(idx[0]), 0.0};
  return {axis_coordinate(idx[0]), axis_coordinate(idx[1])};
}

double Grid::radius(std::size_t node) const {
  auto x = coordinates(node);
  return std::hypot(x[0], x[1]);
}

Grid make_grid(int dim, double half_extent, int points_per_axis, Topology topology) {
  return Grid(dim, half_extent, points_per_axis, topology);
}

const char* to_string(Topology topology) {
  return topology == Topology::periodic ? "periodic" : "truncated";
}

Topology topology_from_string(const char* name) {
  if (std::strcmp(name, "periodic") == 0) return Topology::periodic;
  if (std::strcmp(name, "truncated") == 0) return Topology::truncated;
  throw ValidationError(std::string("unknown topology '") + name + "' (expected periodic or truncated)");
}

}  // namespace fraclap
