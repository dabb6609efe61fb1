#include "hyperinv/nonlinearity.hpp"

#include "hyperinv/errors.hpp"

#include <cmath>

namespace hyperinv {

Nonlinearity Nonlinearity::sqrt_grad() {
  return {"sqrt-grad", [](Point2, double u, double, double ux1, double ux2) {
            return std::sqrt(std::abs(u)) + std::hypot(ux1, ux2);
          }};
}

Nonlinearity Nonlinearity::quadratic() {
  return {"quadratic", [](Point2, double u, double, double ux1, double ux2) {
            return u * u + ux1 * ux1 + ux2 * ux2;
          }};
}

Nonlinearity Nonlinearity::zero() { return {}; }

Nonlinearity Nonlinearity::from_name(const std::string& name) {
  if (name == "sqrt-grad") return sqrt_grad();
  if (name == "quadratic") return quadratic();
  if (name == "zero") return zero();
  throw ConfigError("unknown nonlinearity '" + name + "' (expected sqrt-grad, quadratic or zero)");
}

InitialField InitialField::constant(double value) {
  InitialField p;
  p.constant_ = value;
  return p;
}

InitialField InitialField::function(std::function<double(Point2)> fn) {
  if (!fn) throw InvalidArgument("initial field function is empty");
  InitialField p;
  p.fn_ = std::move(fn);
  return p;
}

double InitialField::laplacian(Point2 x, double h) const {
  if (constant_) return 0.0;
  const double c = fn_(x);
  return (fn_({x.x1 + h, x.x2}) + fn_({x.x1 - h, x.x2}) + fn_({x.x1, x.x2 + h}) +
          fn_({x.x1, x.x2 - h}) - 4.0 * c) /
         (h * h);
}

Point2 InitialField::gradient(Point2 x, double h) const {
  if (constant_) return {0.0, 0.0};
  return {(fn_({x.x1 + h, x.x2}) - fn_({x.x1 - h, x.x2})) / (2.0 * h),
          (fn_({x.x1, x.x2 + h}) - fn_({x.x1, x.x2 - h})) / (2.0 * h)};
}

GridValues initial_denominator(const Nonlinearity& F, const InitialField& p, const SpatialGrid& grid) {
  GridValues out(grid.size());
  const double h = grid.spacing();
  for (int j = 0; j < grid.n(); ++j)
    for (int i = 0; i < grid.n(); ++i) {
      const Point2 x = grid.point(i, j);
      const Point2 g = p.gradient(x, h);
      out[grid.index(i, j)] = F(x, p(x), 0.0, g.x1, g.x2);
    }
  return out;
}

double min_initial_denominator(const Nonlinearity& F, const InitialField& p, const SpatialGrid& grid) {
  return initial_denominator(F, p, grid).cwiseAbs().minCoeff();
}

}  // namespace hyperinv
