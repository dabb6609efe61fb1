#include "hyperinv/errors.hpp"
#include "hyperinv/time_basis.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace hyperinv;

namespace {

// Composite Simpson on [0, T]; independent of the library's quadrature.
template <class F>
double simpson(F f, double T, int panels) {
  const double h = T / panels;
  double s = f(0.0) + f(T);
  for (int k = 1; k < panels; ++k) s += (k % 2 ? 4.0 : 2.0) * f(k * h);
  return s * h / 3.0;
}

const TimeBasis& paper_basis() {
  static const TimeBasis b = build_basis(20, 2.0, TimeGrid(2.0, 256));
  return b;
}

}  // namespace

TEST(TimeGrid, TrapezoidWeightsIntegrateLinearExactly) {
  TimeGrid g(2.0, 8);
  const Eigen::VectorXd w = g.trapezoid_weights();
  double sum = 0.0, lin = 0.0;
  for (int j = 0; j < g.size(); ++j) {
    sum += w[j];
    lin += w[j] * g.node(j);
  }
  EXPECT_DOUBLE_EQ(sum, 2.0);
  EXPECT_NEAR(lin, 2.0, 1e-15);
}

TEST(Moment, ClosedFormsForLowPowers) {
  const double T = 2.0, e = std::exp(2 * T);
  EXPECT_NEAR(moment(0, T), (e - 1) / 2, 1e-12 * e);
  EXPECT_NEAR(moment(1, T), e * (T / 2 - 0.25) + 0.25, 1e-12 * e);
  EXPECT_NEAR(moment(2, T), e * (T * T / 2 - T / 2 + 0.25) - 0.25, 1e-12 * e);
}

TEST(Moment, MatchesSimpsonForHighPower) {
  const double T = 2.0;
  for (int a : {5, 12, 25}) {
    const double ref = simpson([a](double t) { return std::pow(t, a) * std::exp(2 * t); }, T, 20000);
    EXPECT_NEAR(moment(a, T) / ref, 1.0, 1e-10) << "a = " << a;
  }
}

TEST(TimeBasis, SingleFunctionIsNormalisedExponential) {
  const double T = 2.0;
  TimeBasis b = build_basis(1, T, TimeGrid(T, 64));
  const double c = 1.0 / std::sqrt((std::exp(2 * T) - 1) / 2);
  for (double t : {0.0, 0.3, 1.7, 2.0}) {
    EXPECT_NEAR(b.value(0, 0, t), c * std::exp(t), 1e-14);
    EXPECT_NEAR(b.value(0, 2, t), c * std::exp(t), 1e-14);
  }
  EXPECT_NEAR(b.stiffness()(0, 0), 1.0, 1e-14);
}

TEST(TimeBasis, GramMatrixIsIdentityUnderIndependentQuadrature) {
  const TimeBasis& b = paper_basis();
  double worst = 0.0;
  for (int m = 0; m < b.size(); ++m)
    for (int n = 0; n <= m; ++n) {
      const double g = simpson([&](double t) { return b.value(m, 0, t) * b.value(n, 0, t); }, 2.0, 20000);
      worst = std::max(worst, std::abs(g - (m == n ? 1.0 : 0.0)));
    }
  EXPECT_LT(worst, 1e-8);
  EXPECT_LT(b.gram_deviation(), 1e-8);
}

TEST(TimeBasis, StiffnessMatchesFineSimpson) {
  const TimeBasis& b = paper_basis();
  const int M = 100000;
  const double h = 2.0 / M;
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(b.size(), b.size());
  Eigen::VectorXd v(b.size()), d2(b.size());
  for (int j = 0; j <= M; ++j) {
    const double t = j * h, w = (j == 0 || j == M) ? h / 3 : (j % 2 ? 4 * h / 3 : 2 * h / 3);
    for (int n = 0; n < b.size(); ++n) {
      v[n] = b.value(n, 0, t);
      d2[n] = b.value(n, 2, t);
    }
    S.noalias() += w * v * d2.transpose();  // S(m, n) = int Psi_n'' Psi_m
  }
  const double rel = (S - b.stiffness()).norm() / b.stiffness().norm();
  EXPECT_LT(rel, 1e-6);
}

TEST(TimeBasis, StiffnessIsUpperTriangularWithUnitDiagonal) {
  const Eigen::MatrixXd& S = paper_basis().stiffness();
  for (int m = 0; m < S.rows(); ++m) {
    EXPECT_NEAR(S(m, m), 1.0, 1e-9);
    for (int n = 0; n < m; ++n) EXPECT_NEAR(S(m, n), 0.0, 1e-9 * S.norm());
  }
}

TEST(TimeBasis, DerivativesMatchCentredDifferences) {
  const TimeBasis& b = paper_basis();
  const double d = 1e-5;
  for (int n : {0, 4, 11, 19})
    for (double t : {0.4, 1.0, 1.6}) {
      const double fd1 = (b.value(n, 0, t + d) - b.value(n, 0, t - d)) / (2 * d);
      const double fd2 = (b.value(n, 1, t + d) - b.value(n, 1, t - d)) / (2 * d);
      EXPECT_NEAR(fd1, b.value(n, 1, t), 1e-6 * (1 + std::abs(fd1)));
      EXPECT_NEAR(fd2, b.value(n, 2, t), 1e-6 * (1 + std::abs(fd2)));
    }
}

TEST(TimeBasis, SecondDerivativesAtZeroAgreeWithPointEvaluation) {
  const TimeBasis& b = paper_basis();
  for (int n = 0; n < b.size(); ++n)
    EXPECT_NEAR(b.second_derivatives_at_zero()[n], b.value(n, 2, 0.0),
                1e-13 * std::abs(b.second_derivatives_at_zero()[n]));
}

TEST(Projection, RoundTripIsExactOnTheSpan) {
  const TimeBasis& b = paper_basis();
  Eigen::VectorXd c(b.size());
  for (int n = 0; n < b.size(); ++n) c[n] = std::cos(1.3 * n) / (1 + n);
  Eigen::VectorXd series(b.grid().size());
  for (int j = 0; j < series.size(); ++j) series[j] = synthesize(c, b, 0, b.grid().node(j));
  EXPECT_LT((project(series, b) - c).norm(), 1e-9);
}

TEST(Projection, RowsMatchSingleProjection) {
  const TimeBasis& b = paper_basis();
  Eigen::MatrixXd rows(3, b.grid().size());
  for (int j = 0; j < rows.cols(); ++j) {
    const double t = b.grid().node(j);
    rows(0, j) = 1.0;
    rows(1, j) = t * t;
    rows(2, j) = std::sin(3 * t);
  }
  const Eigen::MatrixXd P = project_rows(rows, b);
  for (int r = 0; r < 3; ++r) EXPECT_LT((P.row(r).transpose() - project(rows.row(r).transpose(), b)).norm(), 1e-12);
}

TEST(Projection, RejectsWrongLength) {
  EXPECT_THROW(project(Eigen::VectorXd::Zero(10), paper_basis()), InvalidArgument);
}

TEST(Synthesize, RejectsOutOfRangeArguments) {
  const Eigen::VectorXd c = Eigen::VectorXd::Ones(20);
  EXPECT_THROW(synthesize(c, paper_basis(), 0, -0.1), InvalidArgument);
  EXPECT_THROW(synthesize(c, paper_basis(), 0, 2.1), InvalidArgument);
  EXPECT_THROW(synthesize(c, paper_basis(), 3, 1.0), InvalidArgument);
}

TEST(TimeBasis, ErrorReportsPair) {
  BasisConditioningError e(3, 7, 2e-6);
  EXPECT_EQ(e.m(), 3);
  EXPECT_EQ(e.n(), 7);
  EXPECT_DOUBLE_EQ(e.deviation(), 2e-6);
}

TEST(TimeBasis, BasisCsvHeader) {
  TimeBasis b = build_basis(2, 2.0, TimeGrid(2.0, 4));
  std::ostringstream os;
  write_basis_csv(b, os);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  EXPECT_EQ(header, "t [s],psi_1 [1/sqrt(s)],psi_2 [1/sqrt(s)]");
  int rows = 0;
  for (std::string line; std::getline(is, line);) rows += !line.empty();
  EXPECT_EQ(rows, 5);
}
