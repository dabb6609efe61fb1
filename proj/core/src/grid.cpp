#include "hyperinv/grid.hpp"

#include "hyperinv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hyperinv {

SpatialGrid::SpatialGrid(double half_width, int nodes_per_side)
    : half_width_(half_width), n_(nodes_per_side) {
  if (!(half_width > 0.0)) throw InvalidArgument("grid half-width must be positive");
  if (nodes_per_side < 3) throw InvalidArgument("grid needs at least 3 nodes per side");
  h_ = 2.0 * half_width / (nodes_per_side - 1);
}

int SpatialGrid::layer(int i, int j) const {
  return std::min({i, j, n_ - 1 - i, n_ - 1 - j});
}

double SpatialGrid::quadrature_weight(int i, int j) const {
  const double wi = (i == 0 || i == n_ - 1) ? 0.5 : 1.0;
  const double wj = (j == 0 || j == n_ - 1) ? 0.5 : 1.0;
  return wi * wj * h_ * h_;
}

int subgrid_offset(const SpatialGrid& inner, const SpatialGrid& outer) {
  const double h = outer.spacing();
  if (std::abs(inner.spacing() - h) > 1e-12 * h)
    throw InvalidArgument("subgrid spacing differs from the outer grid spacing");
  const double shift = (outer.half_width() - inner.half_width()) / h;
  const long offset = std::lround(shift);
  if (std::abs(shift - offset) > 1e-9 || offset < 0 ||
      offset + inner.n() > outer.n())
    throw InvalidArgument("subgrid is not node-aligned inside the outer grid");
  return static_cast<int>(offset);
}

GridValues restrict_to(const GridValues& values, const SpatialGrid& outer,
                       const SpatialGrid& inner) {
  if (values.size() != outer.size()) throw InvalidArgument("values do not match the outer grid");
  const int off = subgrid_offset(inner, outer);
  GridValues out(inner.size());
  for (int j = 0; j < inner.n(); ++j)
    for (int i = 0; i < inner.n(); ++i)
      out[inner.index(i, j)] = values[outer.index(i + off, j + off)];
  return out;
}

GridValues extend_by_zero(const GridValues& values, const SpatialGrid& inner,
                          const SpatialGrid& outer) {
  if (values.size() != inner.size()) throw InvalidArgument("values do not match the inner grid");
  const int off = subgrid_offset(inner, outer);
  GridValues out = GridValues::Zero(outer.size());
  for (int j = 0; j < inner.n(); ++j)
    for (int i = 0; i < inner.n(); ++i)
      out[outer.index(i + off, j + off)] = values[inner.index(i, j)];
  return out;
}

double l2_norm(const GridValues& values, const SpatialGrid& grid) {
  double sum = 0.0;
  for (int j = 0; j < grid.n(); ++j)
    for (int i = 0; i < grid.n(); ++i) {
      const double v = values[grid.index(i, j)];
      sum += grid.quadrature_weight(i, j) * v * v;
    }
  return std::sqrt(sum);
}

}  // namespace hyperinv
