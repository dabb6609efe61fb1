#pragma once

#include <Eigen/Core>

#include <cmath>

namespace hyperinv {

struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;
};

inline double norm(Point2 p) { return std::hypot(p.x1, p.x2); }

/// Node values of a scalar field on a SpatialGrid, flat index j * n + i.
using GridValues = Eigen::VectorXd;

/// Vertex-centred uniform grid on the square (-R, R)^2 with n nodes per side.
///
/// Node (i, j) sits at (-R + i h, -R + j h). The layer of a node is its index
/// distance to the nearest side: boundary nodes are layer 0.
class SpatialGrid {
 public:
  SpatialGrid() = default;
  SpatialGrid(double half_width, int nodes_per_side);

  double half_width() const { return half_width_; }
  int n() const { return n_; }
  int size() const { return n_ * n_; }
  double spacing() const { return h_; }

  double coord(int i) const { return -half_width_ + i * h_; }
  Point2 point(int i, int j) const { return {coord(i), coord(j)}; }
  int index(int i, int j) const { return j * n_ + i; }
  int layer(int i, int j) const;
  bool is_interior(int i, int j) const { return layer(i, j) >= 1; }

  /// Trapezoid-rule area weight of node (i, j); the weights sum to (2R)^2.
  double quadrature_weight(int i, int j) const;

  friend bool operator==(const SpatialGrid& a, const SpatialGrid& b) {
    return a.n_ == b.n_ && a.half_width_ == b.half_width_;
  }

 private:
  double half_width_ = 1.0;
  int n_ = 3;
  double h_ = 1.0;
};

/// Node offset of `inner` inside `outer`. Throws InvalidArgument unless both
/// grids share the spacing and inner's nodes coincide with outer's nodes.
int subgrid_offset(const SpatialGrid& inner, const SpatialGrid& outer);

/// Restrict values on `outer` to the aligned subgrid `inner`.
GridValues restrict_to(const GridValues& values, const SpatialGrid& outer,
                       const SpatialGrid& inner);

/// Extend values on `inner` by zero to the aligned supergrid `outer`.
GridValues extend_by_zero(const GridValues& values, const SpatialGrid& inner,
                          const SpatialGrid& outer);

/// Trapezoid-weighted L2 norm over the square.
double l2_norm(const GridValues& values, const SpatialGrid& grid);

}  // namespace hyperinv
