#pragma once

#include "hyperinv/grid.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hyperinv {

/// Parameters of the weight exp(2 lambda r(x)^beta), r(x) = |x - x0| / b.
struct CarlemanWeight {
  double lambda = 2.0;
  double beta = 10.0;
  Point2 x0{0.0, 1.25};
  double b = 3.0;
};

double weight(Point2 x, const CarlemanWeight& w);

/// The weight at every node of `grid`; computed once and reused by every inner product.
GridValues weight_grid(const SpatialGrid& grid, const CarlemanWeight& w);

struct AdmissibilityReport {
  bool ok = false;
  /// Distance from x0 to the closed square; must be > 0.
  double x0_margin = 0.0;
  /// max over the closed square of |x - x0| (attained at a corner).
  double max_distance = 0.0;
  /// b - max_distance; must be > 0.
  double b_margin = 0.0;
  std::vector<std::string> failures;
};

/// Checks x0 outside the closed square (-R, R)^2, b > max |x - x0|, lambda > 1, beta > 1.
AdmissibilityReport check_admissible(double half_width, const CarlemanWeight& w);

/// LHS / RHS of the weighted estimate for one test function h on `grid`:
///   LHS = sum w |Delta_h h|^2,  RHS = lambda sum w |grad_h h|^2 + lambda^3 sum w |h|^2.
/// Returns nullopt for h == 0. Throws InvalidArgument if h does not vanish on the boundary
/// or if its one-sided normal derivative exceeds a quarter of max |grad_h h| (smooth
/// admissible h leave an O(h^2) residue; h with a genuine normal slope give ~1).
std::optional<double> carleman_ratio(const GridValues& h, const SpatialGrid& grid,
                                     const CarlemanWeight& w);

struct DiagnosticRow {
  double lambda = 0.0;
  double min_ratio = 0.0;
  double median_ratio = 0.0;
  int trials = 0;
};

/// Random test functions ((1 - x1^2)(1 - x2^2))^2 * q(x) with q a random cubic; for each
/// lambda in `lambdas` reports min and median of carleman_ratio over `trials` functions.
/// The same test functions are used for every lambda.
std::vector<DiagnosticRow> carleman_diagnostic(const CarlemanWeight& w, const SpatialGrid& grid,
                                               const std::vector<double>& lambdas, int trials,
                                               std::uint64_t seed);

void write_diagnostic_csv(const std::vector<DiagnosticRow>& rows, std::ostream& out);

}  // namespace hyperinv
