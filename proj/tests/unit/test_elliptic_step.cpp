#include "hyperinv/carleman.hpp"
#include "hyperinv/elliptic_step.hpp"
#include "hyperinv/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace hyperinv;

namespace {

struct Small {
  SpatialGrid grid{1.0, 11};
  TimeBasis basis = build_basis(3, 2.0, TimeGrid(2.0, 64));
  GridValues w = weight_grid(grid, CarlemanWeight{});

  EllipticSolver solver(double eps, SolverBackend backend = SolverBackend::Cholesky) const {
    EllipticOptions o;
    o.epsilon = eps;
    o.backend = backend;
    return EllipticSolver(grid, basis.stiffness(), w, o);
  }

  FieldMatrix smooth_field(double phase) const {
    FieldMatrix W(grid.size(), basis.size());
    for (int j = 0; j < grid.n(); ++j)
      for (int i = 0; i < grid.n(); ++i) {
        const Point2 x = grid.point(i, j);
        for (int m = 0; m < basis.size(); ++m)
          W(grid.index(i, j), m) = std::cos(phase + m) * std::exp(0.3 * x.x1) * (1 + x.x2 * x.x2) / (m + 1);
      }
    return W;
  }

  BoundaryVectors data_of(const FieldMatrix& W) const {
    const BoundaryLayout layout(grid);
    BoundaryVectors d{Eigen::MatrixXd(layout.rows(), W.cols()), Eigen::MatrixXd(layout.rows(), W.cols())};
    for (int m = 0; m < W.cols(); ++m) {
      const GridValues wm = W.col(m);
      for (int r = 0; r < layout.rows(); ++r) d.f(r, m) = wm[layout.nodes[r]];
      d.g.col(m) = normal_derivative(wm, layout);
    }
    return d;
  }

  // q with L W - S W + q = 0 at every interior node.
  Eigen::MatrixXd zero_residual_forcing(const FieldMatrix& W) const {
    DiscreteOperators ops(grid);
    return -(Eigen::MatrixXd(apply(ops.laplacian(), W)) -
             Eigen::MatrixXd(apply(ops.select(), W)) * basis.stiffness().transpose());
  }
};

template <class F>
double simpson(F f, double T, int panels) {
  const double h = T / panels;
  double s = f(0.0) + f(T);
  for (int k = 1; k < panels; ++k) s += (k % 2 ? 4.0 : 2.0) * f(k * h);
  return s * h / 3.0;
}

}  // namespace

TEST(Cutoff, Profile) {
  EXPECT_DOUBLE_EQ(cutoff_profile(0.0, 2.0), 1.0);
  EXPECT_DOUBLE_EQ(cutoff_profile(2.0, 2.0), 1.0);
  EXPECT_DOUBLE_EQ(cutoff_profile(3.0, 2.0), 0.5);
  EXPECT_DOUBLE_EQ(cutoff_profile(4.0, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(cutoff_profile(9.0, 2.0), 0.0);
  // C1 at both junctions
  const double d = 1e-7;
  EXPECT_NEAR((cutoff_profile(2.0 + d, 2.0) - 1.0) / d, 0.0, 1e-6);
  EXPECT_NEAR(cutoff_profile(4.0 - d, 2.0) / d, 0.0, 1e-6);
  for (double s = 2.0; s < 4.0; s += 0.1) EXPECT_GE(cutoff_profile(s, 2.0), cutoff_profile(s + 0.1, 2.0));
}

TEST(Forcing, MatchesFineQuadratureOracle) {
  SpatialGrid grid(1.0, 9);
  const TimeBasis basis = build_basis(2, 2.0, TimeGrid(2.0, 256));
  const Nonlinearity F = Nonlinearity::sqrt_grad();
  const InitialField p = InitialField::constant(0.5);
  ForcingEvaluator fe(basis, F, p, grid);
  FourierField V(grid, 2);
  for (int j = 0; j < grid.n(); ++j)
    for (int i = 0; i < grid.n(); ++i) {
      const Point2 x = grid.point(i, j);
      V.values()(grid.index(i, j), 0) = 0.4 + 0.1 * x.x1 * x.x2;
      V.values()(grid.index(i, j), 1) = -0.05 + 0.02 * std::sin(x.x1 + 2 * x.x2);
    }
  const Eigen::MatrixXd got = fe.evaluate(V);
  ASSERT_EQ(got.rows(), 49);
  const double h = grid.spacing(), den = std::sqrt(0.5);
  const auto& vals = V.values();
  for (int r = 0; r < fe.ops().interior_count(); ++r) {
    const int k = fe.ops().interior()[r];
    const Point2 x = grid.point(k % 9, k / 9);
    const double c = (vals(k, 0) * basis.value(0, 2, 0.0) + vals(k, 1) * basis.value(1, 2, 0.0)) / den;
    double g1[2], g2[2];
    for (int n = 0; n < 2; ++n) {
      g1[n] = (vals(k + 1, n) - vals(k - 1, n)) / (2 * h);
      g2[n] = (vals(k + 9, n) - vals(k - 9, n)) / (2 * h);
    }
    for (int m = 0; m < 2; ++m) {
      const double ref = simpson(
          [&](double t) {
            double u = 0, ut = 0, a = 0, b = 0;
            for (int n = 0; n < 2; ++n) {
              u += vals(k, n) * basis.value(n, 0, t);
              ut += vals(k, n) * basis.value(n, 1, t);
              a += g1[n] * basis.value(n, 0, t);
              b += g2[n] * basis.value(n, 0, t);
            }
            return c * F(x, u, ut, a, b) * basis.value(m, 0, t);
          },
          2.0, 4000);
      EXPECT_NEAR(got(r, m), ref, 1e-4 * got.row(r).norm()) << "node " << k << " mode " << m;
    }
  }
  EXPECT_NEAR(fe.coefficient(V)[0],
              (vals(10, 0) * basis.value(0, 2, 0.0) + vals(10, 1) * basis.value(1, 2, 0.0)) / den, 1e-12);
}

TEST(Forcing, CutoffLimits) {
  Small s;
  ForcingEvaluator fe(s.basis, Nonlinearity::quadratic(), InitialField::constant(0.5), s.grid);
  const FourierField V(s.grid, s.smooth_field(0.2));
  const Eigen::MatrixXd full = fe.evaluate(V);
  EXPECT_EQ(fe.evaluate_cut(V, {1e-9, false}), full);
  EXPECT_EQ(fe.evaluate_cut(V, {1e9, true}), full);
  EXPECT_EQ(fe.evaluate_cut(V, {1e-9, true}).norm(), 0.0);
  EXPECT_THROW(fe.evaluate_cut(V, {0.0, true}), InvalidArgument);
}

TEST(Forcing, RejectsVanishingDenominator) {
  Small s;
  EXPECT_THROW(ForcingEvaluator(s.basis, Nonlinearity::sqrt_grad(), InitialField::constant(0.0), s.grid),
               InvalidArgument);
}

TEST(EllipticSolver, ZeroDataGivesZero) {
  Small s;
  const EllipticSolver solver = s.solver(1e-3);
  const BoundaryLayout layout(s.grid);
  const BoundaryVectors zero{Eigen::MatrixXd::Zero(layout.rows(), 3), Eigen::MatrixXd::Zero(layout.rows(), 3)};
  const FourierField U = solver.minimize(Eigen::MatrixXd::Zero(81, 3), zero);
  EXPECT_EQ(U.values().norm(), 0.0);
}

TEST(EllipticSolver, ManufacturedFieldIsAFixedPoint) {
  Small s;
  const EllipticSolver solver = s.solver(1e-12);
  const FieldMatrix W = s.smooth_field(0.7);
  SolveReport rep;
  const FourierField phi = solver.minimize(s.zero_residual_forcing(W), s.data_of(W), &rep);
  EXPECT_LT((phi.values() - W).norm() / W.norm(), 1e-6);
  EXPECT_LT(rep.relative_residual, 1e-8);
}

TEST(EllipticSolver, ObjectiveMatchesDirectSum) {
  Small s;
  const double eps = 1e-3;
  const EllipticSolver solver = s.solver(eps);
  const FourierField phi(s.grid, s.smooth_field(0.1));
  const Eigen::MatrixXd q = Eigen::MatrixXd::Constant(81, 3, 0.3);
  DiscreteOperators ops(s.grid);
  const Eigen::MatrixXd res = Eigen::MatrixXd(apply(ops.laplacian(), phi.values())) -
                              Eigen::MatrixXd(apply(ops.select(), phi.values())) * s.basis.stiffness().transpose() + q;
  const double h2 = s.grid.spacing() * s.grid.spacing();
  double data = 0.0, reg = 0.0;
  for (int r = 0; r < 81; ++r) data += s.w[ops.interior()[r]] * h2 * res.row(r).squaredNorm();
  for (const SparseMatrix* D : {&ops.d11(), &ops.d22(), &ops.d12()})
    reg += eps * h2 * Eigen::MatrixXd(apply(*D, phi.values())).squaredNorm();
  EXPECT_NEAR(solver.residual_term(phi, q), data, 1e-10 * data);
  EXPECT_NEAR(solver.objective(phi, q), data + reg, 1e-10 * (data + reg));
}

TEST(EllipticSolver, MinimiserBeatsAdmissiblePerturbations) {
  Small s;
  const EllipticSolver solver = s.solver(1e-3);
  const FieldMatrix W = s.smooth_field(1.1);
  const BoundaryVectors data = s.data_of(W);
  const Eigen::MatrixXd q = Eigen::MatrixXd::Constant(81, 3, -0.2);
  const FourierField phi = solver.minimize(q, data);
  const double j = solver.objective(phi, q);
  const ConstraintMap& cm = solver.constraints();
  for (int trial = 0; trial < 5; ++trial) {
    const FieldMatrix X = FieldMatrix::Random(cm.free_count(), 3) * 1e-3;
    FieldMatrix moved = phi.values() + cm.expand(X, data) - cm.offset(data);
    EXPECT_GT(solver.objective(FourierField(s.grid, moved), q), j);
  }
  // The minimiser honours the data.
  const FieldMatrix again = cm.expand(cm.restrict_free(phi.values()), data);
  EXPECT_LT((again - phi.values()).norm(), 1e-12 * phi.values().norm());
}

TEST(EllipticSolver, LinearInForcingAndData) {
  Small s;
  const EllipticSolver solver = s.solver(1e-3);
  const BoundaryVectors d1 = s.data_of(s.smooth_field(0.3)), d2 = s.data_of(s.smooth_field(1.9));
  const Eigen::MatrixXd q1 = Eigen::MatrixXd::Random(81, 3), q2 = Eigen::MatrixXd::Random(81, 3);
  const BoundaryVectors d12{d1.f + 2 * d2.f, d1.g + 2 * d2.g};
  const FieldMatrix lhs = solver.minimize(q1 + 2 * q2, d12).values();
  const FieldMatrix rhs = solver.minimize(q1, d1).values() + 2 * solver.minimize(q2, d2).values();
  EXPECT_LT((lhs - rhs).norm(), 1e-9 * rhs.norm());
}

TEST(EllipticSolver, ConjugateGradientAgreesWithCholesky) {
  Small s;
  const EllipticSolver chol = s.solver(1e-3), cg = s.solver(1e-3, SolverBackend::ConjugateGradient);
  const BoundaryVectors d = s.data_of(s.smooth_field(0.5));
  const Eigen::MatrixXd q = Eigen::MatrixXd::Random(81, 3);
  SolveReport rep;
  const FieldMatrix a = chol.minimize(q, d).values(), b = cg.minimize(q, d, &rep).values();
  EXPECT_LT((a - b).norm(), 1e-6 * a.norm());
  EXPECT_GT(rep.cg_iterations, 0);
  EXPECT_EQ(chol.unknowns(), 49 * 3);  // layer >= 2 nodes of an 11 x 11 grid
}

TEST(EllipticSolver, RejectsBadOptions) {
  Small s;
  EXPECT_THROW(s.solver(0.0), InvalidArgument);
  EXPECT_THROW(EllipticSolver(s.grid, Eigen::MatrixXd::Identity(3, 2), s.w, EllipticOptions{}), InvalidArgument);
}
