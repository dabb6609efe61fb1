#include "hyperinv/elliptic_step.hpp"

#include "hyperinv/errors.hpp"

#include <Eigen/IterativeLinearSolvers>

#include <cmath>
#include <sstream>

namespace hyperinv {

double cutoff_profile(double s, double M) {
  if (s <= M) return 1.0;
  if (s >= 2.0 * M) return 0.0;
  const double t = (s - M) / M;
  return 1.0 - t * t * (3.0 - 2.0 * t);
}

ForcingEvaluator::ForcingEvaluator(const TimeBasis& basis, const Nonlinearity& F,
                                   const InitialField& p, const SpatialGrid& grid)
    : basis_(&basis), F_(F), ops_(grid) {
  const double floor = min_initial_denominator(F, p, grid);
  if (!(floor >= kDenominatorFloor)) {
    std::ostringstream os;
    os << "F(x, p, 0, grad p) vanishes on the domain (min |F| = " << floor << ")";
    throw InvalidArgument(os.str());
  }
  const GridValues den = initial_denominator(F, p, grid);
  const int m = ops_.interior_count();
  denominator_.resize(m);
  lap_p_.resize(m);
  const double h = grid.spacing();
  for (int r = 0; r < m; ++r) {
    const int k = ops_.interior()[r];
    const Point2 x = grid.point(k % grid.n(), k / grid.n());
    points_.push_back(x);
    denominator_[r] = den[k];
    lap_p_[r] = p.laplacian(x, h);
  }
}

Eigen::VectorXd ForcingEvaluator::coefficient(const FourierField& V) const {
  const Eigen::MatrixXd Vi = ops_.select() * V.values();
  return ((Vi * basis_->second_derivatives_at_zero()) - lap_p_).cwiseQuotient(denominator_);
}

Eigen::MatrixXd ForcingEvaluator::evaluate(const FourierField& V) const {
  if (V.count() != basis_->size()) throw InvalidArgument("field and basis differ in N");
  if (!(V.grid() == ops_.grid())) throw InvalidArgument("field and forcing evaluator use different grids");
  const Eigen::MatrixXd Vi = ops_.select() * V.values();
  const Eigen::MatrixXd G1 = ops_.select() * (ops_.grad1() * V.values());
  const Eigen::MatrixXd G2 = ops_.select() * (ops_.grad2() * V.values());
  const Eigen::VectorXd c = ((Vi * basis_->second_derivatives_at_zero()) - lap_p_).cwiseQuotient(denominator_);

  const Eigen::MatrixXd& T0 = basis_->table(0);
  const Eigen::MatrixXd u = Vi * T0;
  const Eigen::MatrixXd ut = Vi * basis_->table(1);
  const Eigen::MatrixXd g1 = G1 * T0;
  const Eigen::MatrixXd g2 = G2 * T0;

  Eigen::MatrixXd integrand = Eigen::MatrixXd::Zero(u.rows(), u.cols());
  for (Eigen::Index j = 0; j < u.cols(); ++j)
    for (Eigen::Index r = 0; r < u.rows(); ++r)
      if (c[r] != 0.0) integrand(r, j) = c[r] * F_(points_[r], u(r, j), ut(r, j), g1(r, j), g2(r, j));

  Eigen::MatrixXd out = integrand * basis_->projector().transpose();
  if (extra_.size() != 0) out += extra_;
  return out;
}

GridValues ForcingEvaluator::magnitude(const FourierField& V) const {
  const FieldMatrix G1 = ops_.grad1() * V.values();
  const FieldMatrix G2 = ops_.grad2() * V.values();
  GridValues s(V.values().rows());
  for (Eigen::Index k = 0; k < s.size(); ++k)
    s[k] = V.values().row(k).norm() +
           std::sqrt(G1.row(k).squaredNorm() + G2.row(k).squaredNorm());
  return s;
}

Eigen::MatrixXd ForcingEvaluator::evaluate_cut(const FourierField& V, const CutoffBound& bound) const {
  Eigen::MatrixXd out = evaluate(V);
  if (!bound.enabled) return out;
  if (!(bound.M > 0.0)) throw InvalidArgument("cut-off bound M must be positive");
  const GridValues s = magnitude(V);
  for (int r = 0; r < ops_.interior_count(); ++r)
    out.row(r) *= cutoff_profile(s[ops_.interior()[r]], bound.M);
  return out;
}

// ---------------------------------------------------------------------------

struct EllipticSolver::Factor {
  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt;
};

EllipticSolver::EllipticSolver(const SpatialGrid& grid, const Eigen::MatrixXd& S,
                               const GridValues& weight, const EllipticOptions& options)
    : options_(options), S_(S), ops_(grid), constraints_(grid) {
  if (!(options.epsilon > 0.0))
    throw InvalidArgument("regularisation epsilon must be positive (SPD normal equations)");
  if (S.rows() != S.cols() || S.rows() < 1) throw InvalidArgument("S must be a non-empty square matrix");
  if (weight.size() != grid.size()) throw InvalidArgument("weight grid does not match the grid");

  const int N = count();
  const double h2 = grid.spacing() * grid.spacing();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(N, N);

  row_weight_.resize(static_cast<Eigen::Index>(ops_.interior_count()) * N);
  for (int r = 0; r < ops_.interior_count(); ++r)
    row_weight_.segment(static_cast<Eigen::Index>(r) * N, N).setConstant(weight[ops_.interior()[r]] * h2);

  const SparseMatrix A = kron(constraints_.node_map(), I);
  B_ = kron(ops_.laplacian(), I) - kron(ops_.select(), S);
  BA_ = B_ * A;
  const SparseMatrix* D[3] = {&ops_.d11(), &ops_.d22(), &ops_.d12()};
  K_ = SparseMatrix(BA_.transpose()) * row_weight_.asDiagonal() * BA_;
  for (int a = 0; a < 3; ++a) {
    R_[a] = kron(*D[a], I);
    RA_[a] = R_[a] * A;
    K_ += (options.epsilon * h2) * SparseMatrix(SparseMatrix(RA_[a].transpose()) * RA_[a]);
  }
  K_.makeCompressed();

  if (options.backend == SolverBackend::Cholesky) {
    factor_ = std::make_unique<Factor>();
    factor_->llt.compute(K_);
    if (factor_->llt.info() != Eigen::Success)
      throw SolverError("Cholesky factorisation of the normal matrix failed", 1.0);
  }
}

EllipticSolver::~EllipticSolver() = default;

Eigen::VectorXd EllipticSolver::solve_normal(const Eigen::VectorXd& rhs, SolveReport& report) const {
  const double bnorm = rhs.norm();
  if (bnorm == 0.0) return Eigen::VectorXd::Zero(rhs.size());
  Eigen::VectorXd x;
  if (options_.backend == SolverBackend::Cholesky) {
    x = factor_->llt.solve(rhs);
    Eigen::VectorXd r = rhs - K_ * x;
    report.relative_residual = r.norm() / bnorm;
    while (report.relative_residual > options_.tolerance && report.refinements < options_.max_refinements) {
      x += factor_->llt.solve(r);
      r = rhs - K_ * x;
      report.relative_residual = r.norm() / bnorm;
      ++report.refinements;
    }
  } else {
    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>> cg;
    cg.setTolerance(0.5 * options_.tolerance);
    cg.setMaxIterations(options_.cg_max_iterations);
    cg.compute(K_);
    x = cg.solve(rhs);
    report.cg_iterations = static_cast<int>(cg.iterations());
    report.relative_residual = (rhs - K_ * x).norm() / bnorm;
  }
  if (!(report.relative_residual <= options_.tolerance)) {
    std::ostringstream os;
    os << "normal equations not solved to tolerance: relative residual " << report.relative_residual;
    throw SolverError(os.str(), report.relative_residual);
  }
  return x;
}

namespace {

Eigen::VectorXd flatten(const Eigen::MatrixXd& m) {
  FieldMatrix rm = m;
  return Eigen::Map<const Eigen::VectorXd>(rm.data(), rm.size());
}

}  // namespace

FourierField EllipticSolver::minimize(const Eigen::MatrixXd& forcing, const BoundaryVectors& data,
                                      SolveReport* report) const {
  const int N = count();
  if (forcing.rows() != ops_.interior_count() || forcing.cols() != N)
    throw InvalidArgument("forcing must be interior_count x N");
  if (data.f.cols() != N) throw InvalidArgument("boundary vectors and S differ in N");
  const FieldMatrix offset = constraints_.offset(data);
  const Eigen::Map<const Eigen::VectorXd> phi0(offset.data(), offset.size());
  const Eigen::VectorXd q = flatten(forcing);
  const double eh2 = options_.epsilon * grid().spacing() * grid().spacing();

  Eigen::VectorXd rhs = BA_.transpose() * row_weight_.cwiseProduct(B_ * phi0 + q);
  for (int a = 0; a < 3; ++a) rhs += eh2 * (RA_[a].transpose() * (R_[a] * phi0));
  rhs = -rhs;

  SolveReport local;
  const Eigen::VectorXd x = solve_normal(rhs, local);
  if (report) *report = local;
  const FieldMatrix X = Eigen::Map<const FieldMatrix>(x.data(), constraints_.free_count(), N);
  return FourierField(grid(), constraints_.expand(X, data));
}

double EllipticSolver::residual_term(const FourierField& phi, const Eigen::MatrixXd& forcing) const {
  const Eigen::VectorXd r = B_ * phi.flat() + flatten(forcing);
  return r.cwiseProduct(row_weight_).dot(r);
}

double EllipticSolver::objective(const FourierField& phi, const Eigen::MatrixXd& forcing) const {
  if (!(phi.grid() == grid()) || phi.count() != count()) throw InvalidArgument("field does not match the solver");
  const double eh2 = options_.epsilon * grid().spacing() * grid().spacing();
  double reg = 0.0;
  for (int a = 0; a < 3; ++a) reg += (R_[a] * phi.flat()).squaredNorm();
  return residual_term(phi, forcing) + eh2 * reg;
}

}  // namespace hyperinv
