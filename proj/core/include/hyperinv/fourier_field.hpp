#pragma once

#include "hyperinv/grid.hpp"

namespace hyperinv {

/// Row-major node x mode storage: the flat vector is node-major, index = node * N + m.
using FieldMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// The discrete U = (u_1, ..., u_N) on a SpatialGrid.
class FourierField {
 public:
  FourierField() = default;
  FourierField(const SpatialGrid& grid, int count);
  FourierField(const SpatialGrid& grid, FieldMatrix values);

  const SpatialGrid& grid() const { return grid_; }
  int count() const { return static_cast<int>(values_.cols()); }

  const FieldMatrix& values() const { return values_; }
  FieldMatrix& values() { return values_; }

  /// u_m on the grid (0-based m).
  GridValues component(int m) const { return values_.col(m); }

  Eigen::Map<const Eigen::VectorXd> flat() const {
    return {values_.data(), values_.size()};
  }

  bool is_finite() const { return values_.allFinite(); }

 private:
  SpatialGrid grid_;
  FieldMatrix values_;
};

}  // namespace hyperinv
