#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "fraclap/exterior.hpp"
#include "fraclap/field.hpp"

namespace fraclap {

/// Quadrature realization of (-Delta)^{alpha/2}:
///
///   (A u)_i = d_i u_i - sum_{j != i} w_ij u_j - b_i
///
/// with symmetric nonnegative pair weights w_ij, diagonal d_i = sum_j w_ij + tail_i
/// and exterior contribution b_i. Off-cell weights are C h^n / |x_i - x_j|^{n+alpha}.
/// The singular central cell is replaced by the symmetrized second-difference term
/// -(C / 2n) K h^{2-alpha} (discrete Laplacian of u), K from self_cell_lattice_constant.
/// Exterior tails are exact (1-D) or radially reduced (2-D) integrals.
///
/// On truncated grids the exterior is zero, a constant or a radial profile. On
/// periodic grids the periodic images are folded into circulant pair weights and
/// there is no exterior (tail = b = 0).
///
/// Pair weights depend only on the node offset, so they are kept in an offset
/// table; products are still dense O(N^2) loops.
class OperatorMatrix {
 public:
  const Grid& grid() const { return grid_; }
  double alpha() const { return alpha_; }
  double c_forward() const { return c_forward_; }
  const ExteriorData& exterior() const { return exterior_; }
  std::size_t size() const { return grid_.node_count(); }

  /// w_ij for i != j; zero for i == j.
  double weight(std::size_t i, std::size_t j) const;
  std::span<const double> diagonal() const { return diagonal_; }
  std::span<const double> tail() const { return tail_; }
  std::span<const double> exterior_rhs() const { return exterior_rhs_; }
  /// Weight of the central-cell second difference on each nearest neighbour.
  double self_cell_weight() const { return self_cell_weight_; }

  /// A u with the stored exterior data; vector fields are handled componentwise.
  Field apply(const Field& u) const;
  /// A u with constant exterior value g in place of the stored data.
  Field apply_with_exterior(const Field& u, double g) const;
  /// A u with zero exterior data (b = 0).
  Field apply_homogeneous(const Field& u) const;
  /// (A u)_node for a scalar field, with the stored exterior data.
  double apply_at(const Field& u, std::size_t node) const;

  /// Dense matrix with d on the diagonal and -w off it.
  Eigen::MatrixXd dense() const;
  /// Principal submatrix on the given nodes.
  Eigen::MatrixXd dense(std::span<const std::size_t> nodes) const;

  /// "FRACMAT1" | rows u32 | cols u32 | row-major f64 of dense(), little-endian.
  void write_dump(const std::string& path) const;

 private:
  friend OperatorMatrix build_operator_matrix(const Grid&, double, const ExteriorData&);
  OperatorMatrix(Grid grid, double alpha, ExteriorData exterior)
      : grid_(grid), alpha_(alpha), exterior_(std::move(exterior)) {}

  std::size_t offset_index(std::size_t i, std::size_t j) const;
  void homogeneous_product(std::span<const double> u, std::span<double> out) const;
  Field apply_impl(const Field& u, std::span<const double> rhs) const;

  Grid grid_;
  double alpha_;
  double c_forward_ = 0.0;
  ExteriorData exterior_;
  double self_cell_weight_ = 0.0;
  std::vector<double> offset_weights_;
  std::vector<double> diagonal_;
  std::vector<double> tail_;
  std::vector<double> exterior_rhs_;
};

OperatorMatrix build_operator_matrix(const Grid& grid, double alpha,
                                     const ExteriorData& exterior = ExteriorData::zero());

/// Gamma(u)_i = sum_{j != i} w_ij (u_i - u_j)^2 plus the exterior term tail_i (u_i - g)^2.
/// Satisfies A(u^2) = 2 u A(u) - Gamma(u) exactly at the weight level.
/// Vector fields return the sum over components.
Field carre_du_champ(const Field& u, const OperatorMatrix& A);

}  // namespace fraclap
