#pragma once

#include "hyperinv/forward.hpp"
#include "hyperinv/fourier_field.hpp"
#include "hyperinv/grid.hpp"

#include <Eigen/SparseCore>

#include <vector>

namespace hyperinv {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Finite-difference stencils on a SpatialGrid as sparse matrices acting on node values.
///
/// Second-order operators (Laplacian, d11, d22, d12) have one row per interior node
/// (layer >= 1). Gradients have one row per node: centred in the interior and
/// second-order one-sided on the boundary.
class DiscreteOperators {
 public:
  explicit DiscreteOperators(const SpatialGrid& grid);

  const SpatialGrid& grid() const { return grid_; }
  const std::vector<int>& interior() const { return interior_; }
  int interior_count() const { return static_cast<int>(interior_.size()); }

  const SparseMatrix& select() const { return select_; }
  const SparseMatrix& laplacian() const { return laplacian_; }
  const SparseMatrix& d11() const { return d11_; }
  const SparseMatrix& d22() const { return d22_; }
  const SparseMatrix& d12() const { return d12_; }
  const SparseMatrix& grad1() const { return grad1_; }
  const SparseMatrix& grad2() const { return grad2_; }

 private:
  SpatialGrid grid_;
  std::vector<int> interior_;
  SparseMatrix select_, laplacian_, d11_, d22_, d12_, grad1_, grad2_;
};

/// Applies a node operator to every Fourier component: op * U.
FieldMatrix apply(const SparseMatrix& op, const FieldMatrix& values);

/// Affine parametrisation of the fields that satisfy the Cauchy data.
///
/// Boundary nodes take f (corners: mean of the two sides). A first-layer node q next to
/// boundary node b with inward neighbour r satisfies the extraction stencil
/// g_b = (3 f_b - 4 u_q + u_r) / (2h), i.e. u_q = (3 f_b - 2h g_b + u_r) / 4; first-layer
/// corner nodes average the two such relations. Nodes of layer >= 2 are free.
///
///   U = node_map * X + f_map * F + g_map * G
///
/// with X the free values (free x N) and F, G the projected data (boundary rows x N).
class ConstraintMap {
 public:
  explicit ConstraintMap(const SpatialGrid& grid);

  const SpatialGrid& grid() const { return grid_; }
  const BoundaryLayout& layout() const { return layout_; }
  const std::vector<int>& free_nodes() const { return free_; }
  int free_count() const { return static_cast<int>(free_.size()); }
  /// Nodes fixed by the data (boundary plus first layer).
  int constrained_count() const { return grid_.size() - free_count(); }

  const SparseMatrix& node_map() const { return node_map_; }
  const SparseMatrix& f_map() const { return f_map_; }
  const SparseMatrix& g_map() const { return g_map_; }

  FieldMatrix offset(const BoundaryVectors& data) const;
  FieldMatrix expand(const FieldMatrix& free_values, const BoundaryVectors& data) const;
  FieldMatrix restrict_free(const FieldMatrix& full) const;

 private:
  SpatialGrid grid_;
  BoundaryLayout layout_;
  std::vector<int> free_;
  SparseMatrix node_map_, f_map_, g_map_;
};

/// Kronecker product A (x) B for sparse A and dense B, dropping exact zeros of B.
SparseMatrix kron(const SparseMatrix& a, const Eigen::MatrixXd& b);

}  // namespace hyperinv
