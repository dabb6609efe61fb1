#include "hyperinv/carleman.hpp"

#include "hyperinv/errors.hpp"
#include "hyperinv/forward.hpp"
#include "hyperinv/seed.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

namespace hyperinv {

double weight(Point2 x, const CarlemanWeight& w) {
  const double r = norm({x.x1 - w.x0.x1, x.x2 - w.x0.x2}) / w.b;
  return std::exp(2.0 * w.lambda * std::pow(r, w.beta));
}

GridValues weight_grid(const SpatialGrid& grid, const CarlemanWeight& w) {
  GridValues out(grid.size());
  for (int j = 0; j < grid.n(); ++j)
    for (int i = 0; i < grid.n(); ++i) out[grid.index(i, j)] = weight(grid.point(i, j), w);
  return out;
}

AdmissibilityReport check_admissible(double half_width, const CarlemanWeight& w) {
  AdmissibilityReport rep;
  const double R = half_width;
  const double dx = std::max(std::abs(w.x0.x1) - R, 0.0);
  const double dy = std::max(std::abs(w.x0.x2) - R, 0.0);
  rep.x0_margin = std::hypot(dx, dy);
  rep.max_distance = std::hypot(std::abs(w.x0.x1) + R, std::abs(w.x0.x2) + R);
  rep.b_margin = w.b - rep.max_distance;
  auto fail = [&](const std::string& s) { rep.failures.push_back(s); };
  std::ostringstream os;
  if (!(rep.x0_margin > 0.0)) fail("carleman.x0 lies in the closed domain");
  if (!(rep.b_margin > 0.0)) {
    os << "carleman.b = " << w.b << " must exceed max |x - x0| = " << rep.max_distance;
    fail(os.str());
  }
  if (!(w.lambda > 1.0)) fail("carleman.lambda must be > 1");
  if (!(w.beta > 1.0)) fail("carleman.beta must be > 1");
  rep.ok = rep.failures.empty();
  return rep;
}

std::optional<double> carleman_ratio(const GridValues& hv, const SpatialGrid& grid,
                                     const CarlemanWeight& w) {
  if (hv.size() != grid.size()) throw InvalidArgument("test function does not match the grid");
  const double peak = hv.cwiseAbs().maxCoeff();
  if (peak == 0.0) return std::nullopt;

  const int n = grid.n();
  const double h = grid.spacing();
  double lhs = 0.0, grad2 = 0.0, val2 = 0.0, max_grad = 0.0;
  for (int j = 1; j < n - 1; ++j)
    for (int i = 1; i < n - 1; ++i) {
      const int k = grid.index(i, j);
      const double lap = (hv[k + 1] + hv[k - 1] + hv[k + n] + hv[k - n] - 4.0 * hv[k]) / (h * h);
      const double g1 = (hv[k + 1] - hv[k - 1]) / (2.0 * h);
      const double g2 = (hv[k + n] - hv[k - n]) / (2.0 * h);
      const double wk = weight(grid.point(i, j), w) * h * h;
      lhs += wk * lap * lap;
      grad2 += wk * (g1 * g1 + g2 * g2);
      val2 += wk * hv[k] * hv[k];
      max_grad = std::max(max_grad, std::hypot(g1, g2));
    }

  const BoundaryLayout layout(grid);
  const Eigen::VectorXd dn = normal_derivative(hv, layout);
  for (int r = 0; r < layout.rows(); ++r) {
    if (std::abs(hv[layout.nodes[r]]) > 1e-12 * peak)
      throw InvalidArgument("test function does not vanish on the boundary");
    if (std::abs(dn[r]) > 0.25 * max_grad)
      throw InvalidArgument("test function has a non-zero normal derivative on the boundary");
  }
  const double rhs = w.lambda * grad2 + std::pow(w.lambda, 3) * val2;
  return lhs / rhs;
}

std::vector<DiagnosticRow> carleman_diagnostic(const CarlemanWeight& w, const SpatialGrid& grid,
                                               const std::vector<double>& lambdas, int trials,
                                               std::uint64_t seed) {
  if (trials < 1) throw InvalidArgument("diagnostic needs at least one trial");
  std::mt19937_64 rng(derive_seed(seed, "carleman-diagnostic"));
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const double R = grid.half_width();

  std::vector<GridValues> tests;
  for (int t = 0; t < trials; ++t) {
    double a[10];
    for (double& v : a) v = uni(rng);
    GridValues hv(grid.size());
    for (int j = 0; j < grid.n(); ++j)
      for (int i = 0; i < grid.n(); ++i) {
        const Point2 x = grid.point(i, j);
        const double s = x.x1 / R, u = x.x2 / R;
        const double bump = std::pow((1.0 - s * s) * (1.0 - u * u), 2);
        const double q = a[0] + a[1] * s + a[2] * u + a[3] * s * s + a[4] * s * u + a[5] * u * u +
                         a[6] * s * s * s + a[7] * s * s * u + a[8] * s * u * u + a[9] * u * u * u;
        hv[grid.index(i, j)] = bump * q;
      }
    tests.push_back(std::move(hv));
  }

  std::vector<DiagnosticRow> rows;
  for (double lambda : lambdas) {
    CarlemanWeight wl = w;
    wl.lambda = lambda;
    std::vector<double> ratios;
    for (const GridValues& hv : tests)
      if (auto r = carleman_ratio(hv, grid, wl)) ratios.push_back(*r);
    DiagnosticRow row;
    row.lambda = lambda;
    row.trials = static_cast<int>(ratios.size());
    if (!ratios.empty()) {
      std::sort(ratios.begin(), ratios.end());
      row.min_ratio = ratios.front();
      const std::size_t m = ratios.size();
      row.median_ratio = m % 2 ? ratios[m / 2] : 0.5 * (ratios[m / 2 - 1] + ratios[m / 2]);
    } else {
      row.min_ratio = row.median_ratio = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(row);
  }
  return rows;
}

void write_diagnostic_csv(const std::vector<DiagnosticRow>& rows, std::ostream& out) {
  out << "lambda [1],min_ratio [1],median_ratio [1],trials [count]\n" << std::setprecision(12);
  for (const auto& r : rows)
    out << r.lambda << ',' << r.min_ratio << ',' << r.median_ratio << ',' << r.trials << '\n';
}

}  // namespace hyperinv
