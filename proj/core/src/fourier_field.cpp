#include "hyperinv/fourier_field.hpp"

#include "hyperinv/errors.hpp"

namespace hyperinv {

FourierField::FourierField(const SpatialGrid& grid, int count)
    : grid_(grid), values_(FieldMatrix::Zero(grid.size(), count)) {
  if (count < 1) throw InvalidArgument("Fourier field needs at least one component");
}

FourierField::FourierField(const SpatialGrid& grid, FieldMatrix values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.rows() != grid.size()) throw InvalidArgument("Fourier field rows do not match the grid");
  if (values_.cols() < 1) throw InvalidArgument("Fourier field needs at least one component");
}

}  // namespace hyperinv
