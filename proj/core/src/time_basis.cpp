#include "hyperinv/time_basis.hpp"

#include "hyperinv/errors.hpp"

#include <Eigen/Cholesky>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <iomanip>
#include <ostream>

namespace hyperinv {

namespace {

// 100 decimal digits: the monomial Gram matrix at N = 20 on [0, 2] loses ~35 digits,
// and so does the forward moment recursion.
using Real = boost::multiprecision::cpp_bin_float_100;
using RealPoly = std::vector<Real>;

constexpr double kGramTolerance = 1e-8;

std::vector<Real> moments_hp(int max_power, const Real& T) {
  std::vector<Real> m(max_power + 1);
  const Real e2T = exp(2 * T);
  m[0] = (e2T - 1) / 2;
  Real tpow = 1;
  for (int a = 1; a <= max_power; ++a) {
    tpow *= T;
    m[a] = (tpow * e2T - a * m[a - 1]) / 2;
  }
  return m;
}

Real inner(const RealPoly& p, const RealPoly& q, const std::vector<Real>& m) {
  Real s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0) continue;
    Real row = 0;
    for (std::size_t j = 0; j < q.size(); ++j) row += q[j] * m[i + j];
    s += p[i] * row;
  }
  return s;
}

RealPoly derivative(const RealPoly& p) {
  RealPoly d(p.size(), Real(0));
  for (std::size_t k = 0; k + 1 < p.size(); ++k) d[k] = p[k + 1] * static_cast<int>(k + 1);
  return d;
}

// Chebyshev coefficients (in x = 2t/T - 1) of the monomials t^k, k < count.
std::vector<RealPoly> monomials_in_chebyshev(int count, const Real& T) {
  std::vector<RealPoly> out(count, RealPoly(count, Real(0)));
  out[0][0] = 1;
  const Real half_T = T / 2;
  for (int k = 0; k + 1 < count; ++k) {
    const RealPoly& a = out[k];
    RealPoly next(count, Real(0));
    for (int j = 0; j <= k; ++j) {
      next[j] += a[j];  // t = (T/2)(1 + x)
      if (j == 0) {
        next[1] += a[0];
      } else {
        next[j + 1] += a[j] / 2;
        next[j - 1] += a[j] / 2;
      }
    }
    for (auto& v : next) v *= half_T;
    out[k + 1] = std::move(next);
  }
  return out;
}

Eigen::VectorXd to_chebyshev(const RealPoly& p, const std::vector<RealPoly>& cheb) {
  const int count = static_cast<int>(p.size());
  Eigen::VectorXd c(count);
  for (int j = 0; j < count; ++j) {
    Real s = 0;
    for (int k = 0; k < count; ++k) s += p[k] * cheb[k][j];
    c[j] = static_cast<double>(s);
  }
  return c;
}

}  // namespace

TimeGrid::TimeGrid(double final_time, int intervals)
    : final_time_(final_time), intervals_(intervals) {
  if (!(final_time > 0.0)) throw InvalidArgument("final time must be positive");
  if (intervals < 2) throw InvalidArgument("time grid needs at least 2 intervals");
}

Eigen::VectorXd TimeGrid::trapezoid_weights() const {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(size(), step());
  w[0] *= 0.5;
  w[intervals_] *= 0.5;
  return w;
}

ChebyshevSeries::ChebyshevSeries(double final_time, Eigen::VectorXd coefficients)
    : final_time_(final_time), coeffs_(std::move(coefficients)) {}

double ChebyshevSeries::operator()(double t) const {
  const double x = 2.0 * t / final_time_ - 1.0;
  double b1 = 0.0, b2 = 0.0;
  for (Eigen::Index k = coeffs_.size() - 1; k >= 1; --k) {
    const double b0 = coeffs_[k] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return coeffs_.size() == 0 ? 0.0 : coeffs_[0] + x * b1 - b2;
}

double TimeBasis::value(int n, int order, double t) const {
  return factors_[order][n](t) * std::exp(t);
}

double moment(int power, double final_time) {
  if (power < 0) throw InvalidArgument("moment power must be non-negative");
  if (!(final_time >= 0.0)) throw InvalidArgument("moment interval must be non-negative");
  return static_cast<double>(moments_hp(power, Real(final_time))[power]);
}

TimeBasis build_basis(int count, double final_time, const TimeGrid& grid) {
  if (count < 1) throw InvalidArgument("basis size N must be at least 1");
  if (!(final_time > 0.0)) throw InvalidArgument("final time must be positive");
  if (std::abs(grid.final_time() - final_time) > 1e-12 * final_time)
    throw InvalidArgument("time grid does not span [0, T]");

  const int N = count;
  const Real T(final_time);
  const std::vector<Real> m = moments_hp(2 * N, T);

  // Modified Gram-Schmidt on t^(n-1) e^t in monomial coordinates, two passes.
  std::vector<RealPoly> P;
  P.reserve(N);
  for (int n = 0; n < N; ++n) {
    RealPoly v(N, Real(0));
    v[n] = 1;
    for (int pass = 0; pass < 2; ++pass) {
      for (const RealPoly& q : P) {
        const Real c = inner(v, q, m);
        for (int k = 0; k < N; ++k) v[k] -= c * q[k];
      }
    }
    const Real nv = sqrt(inner(v, v, m));
    for (auto& x : v) x /= nv;
    P.push_back(std::move(v));
  }

  TimeBasis basis(grid);
  const auto cheb = monomials_in_chebyshev(N, T);
  std::vector<RealPoly> Q2(N);
  basis.psi2_at_zero_.resize(N);
  basis.monomials_.resize(N);
  for (int n = 0; n < N; ++n) {
    const RealPoly d1 = derivative(P[n]);
    const RealPoly d2 = derivative(d1);
    RealPoly q1(N), q2(N);
    for (int k = 0; k < N; ++k) {
      q1[k] = P[n][k] + d1[k];
      q2[k] = P[n][k] + 2 * d1[k] + d2[k];
    }
    basis.factors_[0].emplace_back(final_time, to_chebyshev(P[n], cheb));
    basis.factors_[1].emplace_back(final_time, to_chebyshev(q1, cheb));
    basis.factors_[2].emplace_back(final_time, to_chebyshev(q2, cheb));
    basis.psi2_at_zero_[n] = static_cast<double>(q2[0]);
    basis.monomials_[n].resize(N);
    for (int k = 0; k < N; ++k) basis.monomials_[n][k] = static_cast<double>(P[n][k]);
    Q2[n] = std::move(q2);
  }

  basis.stiffness_.resize(N, N);
  for (int mm = 0; mm < N; ++mm)
    for (int n = 0; n < N; ++n)
      basis.stiffness_(mm, n) = static_cast<double>(inner(Q2[n], P[mm], m));

  const int nt = grid.size();
  for (int order = 0; order < 3; ++order) {
    basis.tables_[order].resize(N, nt);
    for (int j = 0; j < nt; ++j) {
      const double t = grid.node(j);
      const double et = std::exp(t);
      for (int n = 0; n < N; ++n) basis.tables_[order](n, j) = basis.factors_[order][n](t) * et;
    }
  }

  const Eigen::MatrixXd gram = quadrature_gram_matrix(basis);
  int worst_m = 0, worst_n = 0;
  double worst = 0.0;
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      const double dev = std::abs(gram(a, b) - (a == b ? 1.0 : 0.0));
      if (dev > worst) {
        worst = dev;
        worst_m = a;
        worst_n = b;
      }
    }
  basis.gram_deviation_ = worst;
  if (!(worst <= kGramTolerance)) throw BasisConditioningError(worst_m + 1, worst_n + 1, worst);

  // Discrete (trapezoid) Gram correction so that projection is exact on the span.
  const Eigen::VectorXd w = grid.trapezoid_weights();
  const Eigen::MatrixXd weighted = basis.tables_[0] * w.asDiagonal();
  const Eigen::MatrixXd discrete_gram = weighted * basis.tables_[0].transpose();
  basis.projector_ = discrete_gram.llt().solve(weighted);
  return basis;
}

Eigen::MatrixXd stiffness_matrix(const TimeBasis& basis) { return basis.stiffness(); }

Eigen::MatrixXd quadrature_gram_matrix(const TimeBasis& basis) {
  using Rule = boost::math::quadrature::gauss<double, 30>;
  constexpr int kPanels = 16;
  const int N = basis.size();
  const double T = basis.final_time();
  const double width = T / kPanels;

  std::vector<double> nodes, weights;
  const auto& abscissa = Rule::abscissa();
  const auto& rule_weights = Rule::weights();
  for (int p = 0; p < kPanels; ++p) {
    const double mid = (p + 0.5) * width;
    for (std::size_t k = 0; k < abscissa.size(); ++k) {
      const double dx = 0.5 * width * abscissa[k];
      const double wk = 0.5 * width * rule_weights[k];
      nodes.push_back(mid + dx);
      weights.push_back(wk);
      if (abscissa[k] != 0.0) {
        nodes.push_back(mid - dx);
        weights.push_back(wk);
      }
    }
  }
  Eigen::MatrixXd samples(N, static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t q = 0; q < nodes.size(); ++q)
    for (int n = 0; n < N; ++n) samples(n, q) = basis.value(n, 0, nodes[q]);
  const Eigen::Map<const Eigen::VectorXd> w(weights.data(), static_cast<Eigen::Index>(weights.size()));
  return samples * w.asDiagonal() * samples.transpose();
}

Eigen::VectorXd project(const Eigen::Ref<const Eigen::VectorXd>& series, const TimeBasis& basis) {
  if (series.size() != basis.grid().size())
    throw InvalidArgument("time series length does not match the basis time grid");
  return basis.projector() * series;
}

Eigen::MatrixXd project_rows(const Eigen::MatrixXd& series, const TimeBasis& basis) {
  if (series.cols() != basis.grid().size())
    throw InvalidArgument("time series length does not match the basis time grid");
  return series * basis.projector().transpose();
}

double synthesize(const Eigen::Ref<const Eigen::VectorXd>& coeffs, const TimeBasis& basis,
                  int order, double t) {
  if (order < 0 || order > 2) throw InvalidArgument("derivative order must be 0, 1 or 2");
  if (coeffs.size() != basis.size()) throw InvalidArgument("coefficient vector length differs from N");
  if (!(t >= 0.0 && t <= basis.final_time())) throw InvalidArgument("synthesis time outside [0, T]");
  double s = 0.0;
  for (int n = 0; n < basis.size(); ++n)
    if (coeffs[n] != 0.0) s += coeffs[n] * basis.factor(n, order)(t);
  return s * std::exp(t);
}

void write_basis_csv(const TimeBasis& basis, std::ostream& out) {
  out << "t [s]";
  for (int n = 1; n <= basis.size(); ++n) out << ",psi_" << n << " [1/sqrt(s)]";
  out << '\n' << std::setprecision(17);
  const auto& tab = basis.table(0);
  for (int j = 0; j < basis.grid().size(); ++j) {
    out << basis.grid().node(j);
    for (int n = 0; n < basis.size(); ++n) out << ',' << tab(n, j);
    out << '\n';
  }
}

}  // namespace hyperinv
