#pragma once

#include "hyperinv/fourier_field.hpp"
#include "hyperinv/nonlinearity.hpp"
#include "hyperinv/time_basis.hpp"

#include <iosfwd>
#include <vector>

namespace hyperinv {

/// u_comp(x, t) = sum_n u_n(x) Psi_n(t); throws InvalidArgument for t outside [0, T].
GridValues compute_u_comp(const FourierField& U, const TimeBasis& basis, double t);

/// c(x) = (sum_n u_n(x) Psi_n''(0) - Delta_h p(x)) / F(x, p, 0, grad_h p) at every node,
/// optionally clipped below at 0. Throws InvalidArgument where |F(x, p, 0, grad p)| < 1e-12.
GridValues compute_c(const FourierField& U, const TimeBasis& basis, const InitialField& p,
                     const Nonlinearity& F, bool clip_negative = false);

/// Returned in place of an infinite support score.
inline constexpr double kSupportScoreCap = 1e12;

struct ComponentScore {
  double true_value = 0.0;       // mean of c_true over the component
  int nodes = 0;
  double peak_value = 0.0;       // max of c_comp over the component
  Point2 peak_location;
  double support_score = 0.0;    // mean c_comp on the component / mean |c_comp| off the support
};

struct LocalMaximum {
  double value = 0.0;
  Point2 location;
  int component = -1;            // index into Metrics::components, -1 outside the true support
};

struct Metrics {
  double relative_l2_error = 0.0;
  /// mean(c_comp over the true support) / mean(|c_comp| over its complement), capped.
  double support_score = 0.0;
  std::vector<ComponentScore> components;  // 4-connected components of supp(c_true)
  std::vector<LocalMaximum> maxima;        // local maxima of c_comp, descending
};

/// Compares a reconstruction with the true potential on the same grid. The relative error
/// covers every node; the support scores and local maxima only see nodes of layer >=
/// min_layer (layers 0 and 1 are fixed by the boundary data, not reconstructed).
Metrics score(const GridValues& c_comp, const GridValues& c_true, const SpatialGrid& grid,
              int min_layer = 0);

/// Connected components (4-neighbour) of {c != 0}; -1 outside. Components are numbered
/// in order of their first node in flat index order.
std::vector<int> label_components(const GridValues& c, const SpatialGrid& grid);

/// Nodes of layer >= min_layer whose value is positive and >= all 8 neighbours of layer
/// >= min_layer, sorted by decreasing value. Plateaus are reported once.
std::vector<int> local_maxima(const GridValues& values, const SpatialGrid& grid, int min_layer = 0);

void write_metrics_csv(const Metrics& m, std::ostream& out);

}  // namespace hyperinv
