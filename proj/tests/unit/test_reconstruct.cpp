#include "hyperinv/errors.hpp"
#include "hyperinv/forward.hpp"
#include "hyperinv/reconstruct.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

using namespace hyperinv;

namespace {

const TimeBasis& basis3() {
  static const TimeBasis b = build_basis(3, 2.0, TimeGrid(2.0, 32));
  return b;
}

}  // namespace

TEST(ComputeC, MatchesPointwiseFormula) {
  SpatialGrid g(1.0, 7);
  FourierField U(g, 3);
  for (int k = 0; k < g.size(); ++k)
    for (int m = 0; m < 3; ++m) U.values()(k, m) = 0.01 * (k + 1) * (m == 1 ? -1.0 : 1.0);
  const GridValues c = compute_c(U, basis3(), InitialField::constant(0.5), Nonlinearity::sqrt_grad());
  for (int k = 0; k < g.size(); ++k) {
    double num = 0.0;
    for (int m = 0; m < 3; ++m) num += U.values()(k, m) * basis3().value(m, 2, 0.0);
    EXPECT_NEAR(c[k], num / std::sqrt(0.5), 1e-12 * (1 + std::abs(c[k])));
  }
  const GridValues clipped = compute_c(U, basis3(), InitialField::constant(0.5), Nonlinearity::sqrt_grad(), true);
  EXPECT_GE(clipped.minCoeff(), 0.0);
  EXPECT_EQ(clipped, c.cwiseMax(0.0));
}

TEST(ComputeC, HomogeneousInNumerator) {
  SpatialGrid g(1.0, 7);
  FourierField U(g, 3);
  for (int k = 0; k < g.size(); ++k)
    for (int m = 0; m < 3; ++m) U.values()(k, m) = std::sin(0.3 * k + m);
  const auto p = InitialField::constant(0.5);
  const GridValues c = compute_c(U, basis3(), p, Nonlinearity::sqrt_grad());
  FourierField V(g, U.values() * -2.5);
  EXPECT_LT((compute_c(V, basis3(), p, Nonlinearity::sqrt_grad()) + 2.5 * c).norm(), 1e-10 * c.norm());
}

// Exact data projected onto the basis and read back at t = 0. A broad bump keeps the
// time traces smooth; narrow bumps need more modes before the trend sets in.
TEST(ComputeC, ProjectedForwardSolutionImprovesWithBasisSize) {
  const SpatialGrid omega(1.0, 65), G(4.0, 257);
  GridValues c(omega.size());
  for (int j = 0; j < omega.n(); ++j)
    for (int i = 0; i < omega.n(); ++i) {
      const Point2 x = omega.point(i, j);
      c[omega.index(i, j)] = 2.0 * std::exp(-(x.x1 * x.x1 + x.x2 * x.x2) / 0.3);
    }
  const TimeGrid time(2.0, 512);
  const auto F = Nonlinearity::sqrt_grad();
  const auto p = InitialField::constant(0.5);
  WaveOptions o;
  o.record = omega;
  const WaveField w = solve_wave(extend_by_zero(c, omega, G), F, p, G, time, o);
  std::vector<double> err;
  for (int N : {5, 10, 20}) {
    const TimeBasis b = build_basis(N, 2.0, time);
    const FourierField U(omega, project_rows(w.values, b));
    err.push_back((compute_c(U, b, p, F) - c).norm() / c.norm());
  }
  EXPECT_GT(err[0], err[1]);
  EXPECT_GT(err[1], err[2]);
}

TEST(ComputeC, NonConstantInitialStateUsesItsLaplacian) {
  SpatialGrid g(1.0, 9);
  FourierField U(g, 3);
  const InitialField p = InitialField::function([](Point2 x) { return 1.0 + x.x1 * x.x1; });
  const GridValues c = compute_c(U, basis3(), p, Nonlinearity::quadratic());
  // u_n = 0: c = -Delta p / (p^2 + |grad p|^2) with Delta p = 2 exactly on the stencil.
  const Point2 x = g.point(4, 2);
  const double pv = 1.0 + x.x1 * x.x1;
  EXPECT_NEAR(c[g.index(4, 2)], -2.0 / (pv * pv + 4 * x.x1 * x.x1), 1e-9);
}

TEST(ComputeC, ThrowsWhenDenominatorVanishes) {
  SpatialGrid g(1.0, 5);
  FourierField U(g, 3);
  EXPECT_THROW(compute_c(U, basis3(), InitialField::constant(0.0), Nonlinearity::quadratic()), InvalidArgument);
}

TEST(ComputeUComp, EvaluatesSeries) {
  SpatialGrid g(1.0, 5);
  FourierField U(g, 3);
  U.values().setConstant(1.0);
  const GridValues u = compute_u_comp(U, basis3(), 1.0);
  const double expect = basis3().value(0, 0, 1.0) + basis3().value(1, 0, 1.0) + basis3().value(2, 0, 1.0);
  EXPECT_NEAR(u[7], expect, 1e-13);
  EXPECT_THROW(compute_u_comp(U, basis3(), 2.5), InvalidArgument);
}

TEST(Components, TwoDisksGiveTwoComponents) {
  SpatialGrid g(1.0, 41);
  const GridValues c = make_phantom(PhantomSpec{}, g);
  const auto label = label_components(c, g);
  EXPECT_EQ(*std::max_element(label.begin(), label.end()), 1);
  EXPECT_EQ(label[g.index(11, 20)], 0);
  EXPECT_EQ(label[g.index(29, 20)], 1);
  EXPECT_EQ(label[g.index(20, 20)], -1);
}

TEST(LocalMaxima, PlateausAndLayers) {
  SpatialGrid g(1.0, 9);
  GridValues v = GridValues::Zero(g.size());
  v[g.index(3, 3)] = v[g.index(4, 3)] = 1.0;  // plateau
  v[g.index(6, 5)] = 2.0;
  v[g.index(0, 4)] = 9.0;  // boundary spike
  auto m = local_maxima(v, g);
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m[0], g.index(0, 4));
  EXPECT_EQ(m[1], g.index(6, 5));
  EXPECT_EQ(m[2], g.index(3, 3));
  m = local_maxima(v, g, 2);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0], g.index(6, 5));
}

TEST(Score, PerfectReconstruction) {
  SpatialGrid g(1.0, 41);
  const GridValues c = make_phantom(PhantomSpec{}, g);
  const Metrics m = score(c, c, g, 2);
  EXPECT_EQ(m.relative_l2_error, 0.0);
  EXPECT_EQ(m.support_score, kSupportScoreCap);
  ASSERT_EQ(m.components.size(), 2u);
  EXPECT_DOUBLE_EQ(m.components[0].true_value, 2.0);
  EXPECT_DOUBLE_EQ(m.components[1].peak_value, 1.0);
  ASSERT_GE(m.maxima.size(), 2u);
  EXPECT_EQ(m.maxima[0].component, 0);
}

TEST(Score, SupportScoreAndErrorByHand) {
  SpatialGrid g(1.0, 41);
  const GridValues c = make_phantom(PhantomSpec{}, g);
  const GridValues shifted = c.array() + 0.1;
  const Metrics m = score(shifted, c, g);
  double in = 0.0;
  int count = 0;
  for (int k = 0; k < g.size(); ++k)
    if (c[k] != 0.0) {
      in += shifted[k];
      ++count;
    }
  EXPECT_NEAR(m.support_score, (in / count) / 0.1, 1e-9);
  EXPECT_NEAR(m.relative_l2_error, 0.1 * 2.0 / l2_norm(c, g), 1e-12);
}

TEST(Score, IgnoresDataLayersWhenAsked) {
  SpatialGrid g(1.0, 41);
  const GridValues c = make_phantom(PhantomSpec{}, g);
  GridValues rec = c;
  rec[g.index(0, 20)] = 50.0;
  rec[g.index(1, 10)] = -50.0;
  EXPECT_EQ(score(rec, c, g, 0).maxima[0].component, -1);
  const Metrics m = score(rec, c, g, 2);
  EXPECT_EQ(m.maxima[0].component, 0);
  EXPECT_EQ(m.support_score, kSupportScoreCap);
  EXPECT_GT(m.relative_l2_error, 0.0);
  EXPECT_THROW(score(rec, c, g, 21), InvalidArgument);
}

TEST(Score, MetricsCsv) {
  SpatialGrid g(1.0, 41);
  const GridValues c = make_phantom(PhantomSpec{}, g);
  std::ostringstream os;
  write_metrics_csv(score(c, c, g), os);
  const std::string header = os.str().substr(0, os.str().find('\n'));
  EXPECT_EQ(header.rfind("relative_l2_error [1],support_score [1],component1_true_value [1]", 0), 0u);
  EXPECT_NE(header.find("max2_component [index]"), std::string::npos);
}
