#include "hyperinv/reconstruct.hpp"

#include "hyperinv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace hyperinv {

GridValues compute_u_comp(const FourierField& U, const TimeBasis& basis, double t) {
  if (U.count() != basis.size()) throw InvalidArgument("field and basis differ in N");
  if (!(t >= 0.0 && t <= basis.final_time())) throw InvalidArgument("time outside [0, T]");
  Eigen::VectorXd psi(basis.size());
  for (int n = 0; n < basis.size(); ++n) psi[n] = basis.value(n, 0, t);
  return U.values() * psi;
}

GridValues compute_c(const FourierField& U, const TimeBasis& basis, const InitialField& p,
                     const Nonlinearity& F, bool clip_negative) {
  if (U.count() != basis.size()) throw InvalidArgument("field and basis differ in N");
  const SpatialGrid& grid = U.grid();
  const GridValues den = initial_denominator(F, p, grid);
  const GridValues num = U.values() * basis.second_derivatives_at_zero();
  GridValues c(grid.size());
  for (int j = 0; j < grid.n(); ++j)
    for (int i = 0; i < grid.n(); ++i) {
      const int k = grid.index(i, j);
      if (!(std::abs(den[k]) >= kDenominatorFloor))
        throw InvalidArgument("F(x, p, 0, grad p) vanishes at a grid node");
      c[k] = (num[k] - p.laplacian(grid.point(i, j), grid.spacing())) / den[k];
      if (clip_negative) c[k] = std::max(c[k], 0.0);
    }
  return c;
}

std::vector<int> label_components(const GridValues& c, const SpatialGrid& grid) {
  const int n = grid.n();
  std::vector<int> label(grid.size(), -1);
  int next = 0;
  std::vector<int> stack;
  for (int start = 0; start < grid.size(); ++start) {
    if (c[start] == 0.0 || label[start] >= 0) continue;
    label[start] = next;
    stack.push_back(start);
    while (!stack.empty()) {
      const int k = stack.back();
      stack.pop_back();
      const int i = k % n, j = k / n;
      const int nb[4][2] = {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
      for (auto [a, b] : nb) {
        if (a < 0 || b < 0 || a >= n || b >= n) continue;
        const int q = grid.index(a, b);
        if (c[q] != 0.0 && label[q] < 0) {
          label[q] = next;
          stack.push_back(q);
        }
      }
    }
    ++next;
  }
  return label;
}

std::vector<int> local_maxima(const GridValues& v, const SpatialGrid& grid, int min_layer) {
  const int n = grid.n();
  std::vector<int> out;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int k = grid.index(i, j);
      if (!(v[k] > 0.0) || grid.layer(i, j) < min_layer) continue;
      bool is_max = true, earlier_equal = false;
      for (int dj = -1; dj <= 1 && is_max; ++dj)
        for (int di = -1; di <= 1; ++di) {
          if ((di == 0 && dj == 0) || i + di < 0 || j + dj < 0 || i + di >= n || j + dj >= n) continue;
          if (grid.layer(i + di, j + dj) < min_layer) continue;
          const int q = grid.index(i + di, j + dj);
          if (v[q] > v[k]) {
            is_max = false;
            break;
          }
          if (v[q] == v[k] && q < k) earlier_equal = true;
        }
      if (is_max && !earlier_equal) out.push_back(k);
    }
  std::stable_sort(out.begin(), out.end(), [&](int a, int b) { return v[a] > v[b]; });
  return out;
}

Metrics score(const GridValues& c_comp, const GridValues& c_true, const SpatialGrid& grid,
              int min_layer) {
  if (min_layer < 0 || 2 * min_layer >= grid.n()) throw InvalidArgument("min_layer out of range");
  if (c_comp.size() != grid.size() || c_true.size() != grid.size())
    throw InvalidArgument("potentials do not match the grid");
  Metrics m;
  const double true_norm = l2_norm(c_true, grid);
  const double err = l2_norm(c_comp - c_true, grid);
  m.relative_l2_error = true_norm > 0.0 ? err / true_norm : err;

  const std::vector<int> label = label_components(c_true, grid);
  const int ncomp = label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
  m.components.resize(ncomp);
  double in_sum = 0.0, out_sum = 0.0;
  int in_count = 0, out_count = 0;
  std::vector<double> comp_sum(ncomp, 0.0);
  for (int k = 0; k < grid.size(); ++k) {
    const Point2 x = grid.point(k % grid.n(), k / grid.n());
    if (grid.layer(k % grid.n(), k / grid.n()) < min_layer) continue;
    if (label[k] < 0) {
      out_sum += std::abs(c_comp[k]);
      ++out_count;
      continue;
    }
    ComponentScore& cs = m.components[label[k]];
    if (cs.nodes == 0 || c_comp[k] > cs.peak_value) {
      cs.peak_value = c_comp[k];
      cs.peak_location = x;
    }
    cs.true_value += c_true[k];
    comp_sum[label[k]] += c_comp[k];
    ++cs.nodes;
    in_sum += c_comp[k];
    ++in_count;
  }
  const double off_mean = out_count ? out_sum / out_count : 0.0;
  auto ratio = [&](double mean_in) {
    if (off_mean == 0.0) return mean_in > 0.0 ? kSupportScoreCap : 0.0;
    return std::min(mean_in / off_mean, kSupportScoreCap);
  };
  m.support_score = in_count ? ratio(in_sum / in_count) : 0.0;
  for (int c = 0; c < ncomp; ++c) {
    ComponentScore& cs = m.components[c];
    if (cs.nodes == 0) continue;
    cs.support_score = ratio(comp_sum[c] / cs.nodes);
    cs.true_value /= cs.nodes;
  }
  for (int k : local_maxima(c_comp, grid, min_layer))
    m.maxima.push_back({c_comp[k], grid.point(k % grid.n(), k / grid.n()), label[k]});
  return m;
}

void write_metrics_csv(const Metrics& m, std::ostream& out) {
  out << "relative_l2_error [1],support_score [1]";
  for (std::size_t c = 0; c < m.components.size(); ++c) {
    const std::string p = "component" + std::to_string(c + 1) + "_";
    out << ',' << p << "true_value [1]," << p << "peak_value [1]," << p << "peak_x1 [1]," << p
        << "peak_x2 [1]," << p << "support_score [1]";
  }
  const std::size_t shown = std::min<std::size_t>(m.maxima.size(), 2);
  for (std::size_t q = 0; q < shown; ++q) {
    const std::string p = "max" + std::to_string(q + 1) + "_";
    out << ',' << p << "value [1]," << p << "x1 [1]," << p << "x2 [1]," << p << "component [index]";
  }
  out << '\n' << std::setprecision(12) << m.relative_l2_error << ',' << m.support_score;
  for (const auto& cs : m.components)
    out << ',' << cs.true_value << ',' << cs.peak_value << ',' << cs.peak_location.x1 << ','
        << cs.peak_location.x2 << ',' << cs.support_score;
  for (std::size_t q = 0; q < shown; ++q) {
    const auto& lm = m.maxima[q];
    out << ',' << lm.value << ',' << lm.location.x1 << ',' << lm.location.x2 << ','
        << (lm.component >= 0 ? lm.component + 1 : 0);
  }
  out << '\n';
}

}  // namespace hyperinv
