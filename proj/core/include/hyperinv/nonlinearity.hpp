#pragma once

#include "hyperinv/grid.hpp"

#include <functional>
#include <optional>
#include <string>

namespace hyperinv {

/// F(x, u, u_t, grad u) in u_tt = Delta u + c(x) F(...).
class Nonlinearity {
 public:
  using Function = std::function<double(Point2 x, double u, double ut, double ux1, double ux2)>;

  Nonlinearity() = default;
  Nonlinearity(std::string name, Function fn) : name_(std::move(name)), fn_(std::move(fn)) {}

  /// sqrt|u| + |grad u|
  static Nonlinearity sqrt_grad();
  /// |u|^2 + |grad u|^2
  static Nonlinearity quadratic();
  /// F = 0: the linear wave equation.
  static Nonlinearity zero();
  /// "sqrt-grad", "quadratic" or "zero"; throws ConfigError otherwise.
  static Nonlinearity from_name(const std::string& name);

  const std::string& name() const { return name_; }
  double operator()(Point2 x, double u, double ut, double ux1, double ux2) const {
    return fn_(x, u, ut, ux1, ux2);
  }

 private:
  std::string name_ = "zero";
  Function fn_ = [](Point2, double, double, double, double) { return 0.0; };
};

/// The initial state p(x) = u(x, 0).
class InitialField {
 public:
  static InitialField constant(double value);
  static InitialField function(std::function<double(Point2)> fn);

  double operator()(Point2 x) const { return constant_ ? *constant_ : fn_(x); }
  const std::optional<double>& constant_value() const { return constant_; }

  /// 5-point Laplacian of p at x with spacing h; exactly 0 for a constant p.
  double laplacian(Point2 x, double h) const;
  /// Centred-difference gradient of p at x with spacing h.
  Point2 gradient(Point2 x, double h) const;

 private:
  std::optional<double> constant_;
  std::function<double(Point2)> fn_;
};

/// F(x, p(x), 0, grad_h p(x)) at every node of `grid`.
GridValues initial_denominator(const Nonlinearity& F, const InitialField& p, const SpatialGrid& grid);

/// Smallest |F(x, p, 0, grad p)| over the grid (closure of Omega). Callers gate on > 1e-12.
double min_initial_denominator(const Nonlinearity& F, const InitialField& p, const SpatialGrid& grid);

inline constexpr double kDenominatorFloor = 1e-12;

}  // namespace hyperinv
