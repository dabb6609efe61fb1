#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <vector>

namespace hyperinv {

/// Uniform time nodes t_j = j T / M_t, j = 0..M_t.
class TimeGrid {
 public:
  TimeGrid(double final_time, int intervals);

  double final_time() const { return final_time_; }
  int intervals() const { return intervals_; }
  int size() const { return intervals_ + 1; }
  double step() const { return final_time_ / intervals_; }
  double node(int j) const { return final_time_ * j / intervals_; }

  /// Composite trapezoid weights on the nodes.
  Eigen::VectorXd trapezoid_weights() const;

  friend bool operator==(const TimeGrid& a, const TimeGrid& b) {
    return a.final_time_ == b.final_time_ && a.intervals_ == b.intervals_;
  }

 private:
  double final_time_;
  int intervals_;
};

/// Polynomial on [0, T] stored as a Chebyshev series in x = 2t/T - 1.
class ChebyshevSeries {
 public:
  ChebyshevSeries() = default;
  ChebyshevSeries(double final_time, Eigen::VectorXd coefficients);

  double operator()(double t) const;
  const Eigen::VectorXd& coefficients() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

 private:
  double final_time_ = 1.0;
  Eigen::VectorXd coeffs_;
};

/// Orthonormal basis {Psi_n} of span{t^(n-1) e^t} in L2(0, T).
///
/// Each function is kept in closed form, Psi_n(t) = P_n(t) e^t with deg P_n = n - 1,
/// so that Psi_n' = (P_n + P_n') e^t and Psi_n'' = (P_n + 2 P_n' + P_n'') e^t are exact.
/// Construction runs modified Gram-Schmidt with one re-orthogonalisation pass in
/// extended precision on the closed-form moments of t^a e^{2t}; the result is then
/// rounded to double-precision Chebyshev coefficients.
///
/// Indices n are 0-based in this API: index 0 is Psi_1.
class TimeBasis {
 public:
  int size() const { return static_cast<int>(factors_[0].size()); }
  const TimeGrid& grid() const { return grid_; }
  double final_time() const { return grid_.final_time(); }

  /// Psi_n^{(order)}(t) for order in {0, 1, 2}.
  double value(int n, int order, double t) const;

  /// Polynomial factor Q with Psi_n^{(order)} = Q e^t.
  const ChebyshevSeries& factor(int n, int order) const { return factors_[order][n]; }

  /// Coefficients of P_n in the monomial basis 1, t, t^2, ... (rounded to double).
  const Eigen::VectorXd& monomial_coefficients(int n) const { return monomials_[n]; }

  /// Basis or derivative samples on the time grid, N x (M_t + 1).
  const Eigen::MatrixXd& table(int order) const { return tables_[order]; }

  /// The vector (Psi_n''(0))_n.
  const Eigen::VectorXd& second_derivatives_at_zero() const { return psi2_at_zero_; }

  /// s_mn = int_0^T Psi_n'' Psi_m dt from the closed forms.
  const Eigen::MatrixXd& stiffness() const { return stiffness_; }

  /// Linear map from samples on the time grid to Fourier coefficients, N x (M_t + 1).
  const Eigen::MatrixXd& projector() const { return projector_; }

  /// max_{m,n} |<Psi_m, Psi_n> - delta_mn| measured by Gauss-Legendre quadrature.
  double gram_deviation() const { return gram_deviation_; }

  friend TimeBasis build_basis(int count, double final_time, const TimeGrid& grid);

 private:
  TimeBasis(TimeGrid grid) : grid_(grid) {}

  TimeGrid grid_;
  std::vector<ChebyshevSeries> factors_[3];
  std::vector<Eigen::VectorXd> monomials_;
  Eigen::MatrixXd tables_[3];
  Eigen::VectorXd psi2_at_zero_;
  Eigen::MatrixXd stiffness_;
  Eigen::MatrixXd projector_;
  double gram_deviation_ = 0.0;
};

/// Builds the basis; throws BasisConditioningError naming the worst (m, n) pair if
/// the Gram matrix deviates from the identity by more than 1e-8.
TimeBasis build_basis(int count, double final_time, const TimeGrid& grid);

/// Exact int_0^T t^a e^{2t} dt.
double moment(int power, double final_time);

/// The matrix S = (s_mn). Not symmetric in general; upper triangular with unit diagonal.
Eigen::MatrixXd stiffness_matrix(const TimeBasis& basis);

/// Gram matrix <Psi_m, Psi_n> by composite Gauss-Legendre quadrature (independent check).
Eigen::MatrixXd quadrature_gram_matrix(const TimeBasis& basis);

/// Fourier coefficients of a series sampled on the basis' time grid.
///
/// The coefficients are the trapezoid-rule inner products <u, Psi_n> corrected by
/// the inverse of the discrete Gram matrix, which makes the projection exact on
/// span{Psi_1..Psi_N}. Throws InvalidArgument on a length mismatch.
Eigen::VectorXd project(const Eigen::Ref<const Eigen::VectorXd>& series, const TimeBasis& basis);

/// Row-wise projection: each row of `series` is a time series; result rows are N-vectors.
Eigen::MatrixXd project_rows(const Eigen::MatrixXd& series, const TimeBasis& basis);

/// sum_n c_n Psi_n^{(order)}(t); throws InvalidArgument for t outside [0, T] or order > 2.
double synthesize(const Eigen::Ref<const Eigen::VectorXd>& coeffs, const TimeBasis& basis,
                  int order, double t);

/// CSV with columns t, Psi_1..Psi_N sampled on the basis' time grid.
void write_basis_csv(const TimeBasis& basis, std::ostream& out);

}  // namespace hyperinv
