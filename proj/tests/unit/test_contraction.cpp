#include "hyperinv/carleman.hpp"
#include "hyperinv/contraction.hpp"
#include "hyperinv/errors.hpp"
#include "hyperinv/io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

using namespace hyperinv;

namespace {

struct SmallProblem {
  SpatialGrid grid{1.0, 11};
  TimeBasis basis = build_basis(3, 2.0, TimeGrid(2.0, 64));
  GridValues w = weight_grid(grid, CarlemanWeight{});
  EllipticSolver solver{grid, basis.stiffness(), w, EllipticOptions{}};
  BoundaryVectors data;

  SmallProblem() {
    const BoundaryLayout layout(grid);
    data.f = Eigen::MatrixXd::Zero(layout.rows(), 3);
    data.g = Eigen::MatrixXd::Zero(layout.rows(), 3);
    for (int r = 0; r < layout.rows(); ++r) {
      data.f(r, 0) = 0.6;
      data.f(r, 1) = -0.1;
    }
  }
};

}  // namespace

TEST(WeightedH1Norm, MatchesDirectSumForLinearField) {
  SpatialGrid g(1.0, 9);
  FourierField U(g, 1);
  for (int j = 0; j < 9; ++j)
    for (int i = 0; i < 9; ++i) U.values()(g.index(i, j), 0) = 1.0 + 2.0 * g.coord(i) - g.coord(j);
  double sum = 0.0;
  for (int j = 0; j < 9; ++j)
    for (int i = 0; i < 9; ++i) {
      const double u = U.values()(g.index(i, j), 0);
      sum += g.quadrature_weight(i, j) * (u * u + 4.0 + 1.0);
    }
  EXPECT_NEAR(weighted_h1_norm(U, GridValues::Ones(g.size())), std::sqrt(sum), 1e-12);
  const GridValues two = GridValues::Constant(g.size(), 4.0);
  EXPECT_NEAR(weighted_h1_norm(U, two), 2 * std::sqrt(sum), 1e-12);
}


TEST(Iteration, RecordsCostsAndDifferences) {
  SmallProblem s;
  ForcingEvaluator fe(s.basis, Nonlinearity::sqrt_grad(), InitialField::constant(0.5), s.grid);
  IterationOptions o;
  o.max_iterations = 4;
  int calls = 0;
  o.observer = [&](const IterationRecord& r) { EXPECT_EQ(r.k, calls++); };
  const RunHistory h = iterate(s.solver, fe, s.data, s.w, o);
  ASSERT_EQ(h.records.size(), 5u);
  EXPECT_EQ(calls, 5);
  EXPECT_EQ(h.records[0].iterate_diff, 0.0);
  EXPECT_NEAR(h.records[0].cost, monitoring_cost(s.solver, fe, h.u0), 1e-12 * h.records[0].cost);
  EXPECT_NEAR(h.records[4].cost, monitoring_cost(s.solver, fe, h.u_comp), 1e-12 * h.records[4].cost);
  EXPECT_GT(h.cutoff_M, 0.0);
  EXPECT_NEAR(h.cutoff_M, 10.0 * fe.magnitude(h.u0).maxCoeff(), 1e-12 * h.cutoff_M);
  // U_0 is the minimiser with the nonlinearity switched off.
  EXPECT_LT((h.u0.values() - init_U0(s.solver, s.data).values()).norm(), 1e-14);
}

TEST(Iteration, ExplicitStartAndDifferenceDefinition) {
  SmallProblem s;
  ForcingEvaluator fe(s.basis, Nonlinearity::quadratic(), InitialField::constant(0.5), s.grid);
  IterationOptions o;
  o.max_iterations = 1;
  o.use_cutoff = false;
  const FourierField u0 = init_U0(s.solver, s.data);
  const RunHistory h = iterate_from(s.solver, fe, s.data, s.w, u0, o);
  const FourierField u1 = s.solver.minimize(fe.evaluate(u0), s.data);
  EXPECT_LT((h.u_comp.values() - u1.values()).norm(), 1e-12 * u1.values().norm());
  const FourierField diff(s.grid, FieldMatrix(u1.values() - u0.values()));
  EXPECT_NEAR(h.records[1].iterate_diff, weighted_h1_norm(diff, s.w), 1e-12);
}

TEST(Iteration, DivergenceGuard) {
  SmallProblem s;
  ForcingEvaluator fe(s.basis, Nonlinearity::sqrt_grad(), InitialField::constant(0.5), s.grid);
  IterationOptions o;
  o.divergence_factor = 1e-30;
  try {
    iterate(s.solver, fe, s.data, s.w, o);
    FAIL() << "expected DivergenceError";
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.iteration(), 1);
  }
}

TEST(Iteration, StabilisationStopsEarly) {
  SmallProblem s;
  ForcingEvaluator fe(s.basis, Nonlinearity::sqrt_grad(), InitialField::constant(0.5), s.grid);
  IterationOptions o;
  o.max_iterations = 50;
  o.stop_on_stabilization = true;
  o.stabilization_tol = 1e300;
  o.stabilization_window = 2;
  const RunHistory h = iterate(s.solver, fe, s.data, s.w, o);
  EXPECT_EQ(h.records.size(), 3u);
  EXPECT_TRUE(h.stopped_early);
}

TEST(Iteration, CheckpointsRoundTrip) {
  SmallProblem s;
  ForcingEvaluator fe(s.basis, Nonlinearity::sqrt_grad(), InitialField::constant(0.5), s.grid);
  const auto dir = std::filesystem::temp_directory_path() / "hyperinv_ckpt_test";
  std::filesystem::remove_all(dir);
  IterationOptions o;
  o.max_iterations = 4;
  o.checkpoint_every = 2;
  o.checkpoint_dir = dir;
  const RunHistory h = iterate(s.solver, fe, s.data, s.w, o);
  EXPECT_TRUE(std::filesystem::exists(dir / "U_0.bin"));
  EXPECT_TRUE(std::filesystem::exists(dir / "U_2.bin"));
  EXPECT_FALSE(std::filesystem::exists(dir / "U_3.bin"));
  int k = -1;
  const FourierField last = read_field_binary(dir / "U_4.bin", &k);
  EXPECT_EQ(k, 4);
  EXPECT_EQ(last.values(), h.u_comp.values());
  std::filesystem::remove_all(dir);
}

TEST(Iteration, ContractionRatios) {
  RunHistory h;
  h.records = {{0, 1.0, 0.0, 0.0}, {1, 1.0, 4.0, 0.0}, {2, 1.0, 2.0, 0.0}, {3, 1.0, 0.5, 0.0}};
  const auto r = contraction_ratios(h);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_DOUBLE_EQ(r[0], 0.5);
  EXPECT_DOUBLE_EQ(r[1], 0.25);
}
