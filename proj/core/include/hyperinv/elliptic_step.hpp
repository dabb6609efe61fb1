#pragma once

#include "hyperinv/discrete_ops.hpp"
#include "hyperinv/forward.hpp"
#include "hyperinv/fourier_field.hpp"
#include "hyperinv/nonlinearity.hpp"
#include "hyperinv/time_basis.hpp"

#include <Eigen/SparseCholesky>

#include <memory>

namespace hyperinv {

/// Smooth cut-off chi: 1 for s <= M, 0 for s >= 2M, 1 - t^2 (3 - 2t) with t = (s - M)/M between.
struct CutoffBound {
  double M = 0.0;
  bool enabled = true;
};

double cutoff_profile(double s, double M);

/// Evaluates the time-integrated nonlinearity at interior nodes:
///
///   F_m(x) = int_0^T c_V(x) F(x, sum v_n Psi_n, sum v_n Psi_n', sum grad v_n Psi_n) Psi_m dt,
///   c_V(x) = (sum v_n Psi_n''(0) - Delta_h p(x)) / F(x, p, 0, grad_h p).
///
/// The time integral is the basis' discrete projection on its time grid, the same map
/// that turns the data into Fourier coefficients.
class ForcingEvaluator {
 public:
  /// Throws InvalidArgument if |F(x, p, 0, grad p)| < 1e-12 at some node.
  ForcingEvaluator(const TimeBasis& basis, const Nonlinearity& F, const InitialField& p,
                   const SpatialGrid& grid);

  const DiscreteOperators& ops() const { return ops_; }
  const TimeBasis& basis() const { return *basis_; }

  /// interior_count x N
  Eigen::MatrixXd evaluate(const FourierField& V) const;
  /// chi(|V| + |grad V|) times evaluate(V); identical to evaluate() when the bound is disabled.
  Eigen::MatrixXd evaluate_cut(const FourierField& V, const CutoffBound& bound) const;

  /// c_V at interior nodes.
  Eigen::VectorXd coefficient(const FourierField& V) const;

  /// Pointwise |V(x)| + |grad V(x)| (Euclidean over modes) at every node.
  GridValues magnitude(const FourierField& V) const;

  /// A fixed field added to every evaluation (manufactured problems).
  void set_extra_source(Eigen::MatrixXd source) { extra_ = std::move(source); }

 private:
  const TimeBasis* basis_;
  Nonlinearity F_;
  DiscreteOperators ops_;
  std::vector<Point2> points_;
  Eigen::VectorXd denominator_;
  Eigen::VectorXd lap_p_;
  Eigen::MatrixXd extra_;
};

enum class SolverBackend { Cholesky, ConjugateGradient };

struct EllipticOptions {
  double epsilon = 7e-5;
  SolverBackend backend = SolverBackend::Cholesky;
  double tolerance = 1e-8;
  int max_refinements = 6;
  int cg_max_iterations = 50000;
};

struct SolveReport {
  double relative_residual = 0.0;
  int refinements = 0;
  int cg_iterations = 0;
};

/// Minimiser of the frozen quadratic functional over fields satisfying the Cauchy data:
///
///   J(phi) = sum_x w(x) |Delta_h phi - S phi + q(x)|^2 h^2
///            + eps sum_x (|D11 phi|^2 + |D22 phi|^2 + |D12 phi|^2) h^2,
///
/// sums over interior nodes. The normal matrix depends only on the grid, S, w and eps;
/// it is assembled (and, for the Cholesky backend, factored) once in the constructor and
/// reused for every right-hand side.
class EllipticSolver {
 public:
  EllipticSolver(const SpatialGrid& grid, const Eigen::MatrixXd& S, const GridValues& weight,
                 const EllipticOptions& options);
  ~EllipticSolver();
  EllipticSolver(const EllipticSolver&) = delete;
  EllipticSolver& operator=(const EllipticSolver&) = delete;

  const SpatialGrid& grid() const { return constraints_.grid(); }
  const ConstraintMap& constraints() const { return constraints_; }
  const DiscreteOperators& ops() const { return ops_; }
  const EllipticOptions& options() const { return options_; }
  int count() const { return static_cast<int>(S_.rows()); }
  int unknowns() const { return static_cast<int>(K_.rows()); }
  long normal_nonzeros() const { return static_cast<long>(K_.nonZeros()); }

  /// Phi(V) given q = F~(V) at interior nodes (interior_count x N).
  FourierField minimize(const Eigen::MatrixXd& forcing, const BoundaryVectors& data,
                        SolveReport* report = nullptr) const;

  /// J(phi) with the forcing frozen at `forcing`.
  double objective(const FourierField& phi, const Eigen::MatrixXd& forcing) const;

  /// Weighted PDE residual part of objective() alone.
  double residual_term(const FourierField& phi, const Eigen::MatrixXd& forcing) const;

 private:
  struct Factor;

  Eigen::VectorXd solve_normal(const Eigen::VectorXd& rhs, SolveReport& report) const;

  EllipticOptions options_;
  Eigen::MatrixXd S_;
  DiscreteOperators ops_;
  ConstraintMap constraints_;
  Eigen::VectorXd row_weight_;  // w(x) h^2 per interior row, repeated per mode
  SparseMatrix B_, BA_;
  SparseMatrix R_[3], RA_[3];
  SparseMatrix K_;
  std::unique_ptr<Factor> factor_;
};

}  // namespace hyperinv
