#pragma once

#include "hyperinv/carleman.hpp"
#include "hyperinv/elliptic_step.hpp"

#include <filesystem>
#include <functional>
#include <vector>

namespace hyperinv {

struct IterationRecord {
  int k = 0;
  double cost = 0.0;
  /// ||U_k - U_{k-1}|| in the weighted H1 norm; 0 for k = 0.
  double iterate_diff = 0.0;
  double seconds = 0.0;
};

struct RunHistory {
  std::vector<IterationRecord> records;
  FourierField u0;
  FourierField u_comp;
  double cutoff_M = 0.0;
  bool stopped_early = false;
};

struct IterationOptions {
  int max_iterations = 25;
  /// Stop once |J_k - J_{k-1}| <= tol * J_{k-1} holds for `stabilization_window` consecutive k.
  bool stop_on_stabilization = false;
  double stabilization_tol = 1e-3;
  int stabilization_window = 3;
  /// Abort when J(U_k) > factor * J(U_0).
  double divergence_factor = 1e3;
  bool use_cutoff = true;
  /// Cut-off bound; <= 0 selects 10 * max(|U_0| + |grad U_0|).
  double cutoff_M = 0.0;
  /// Write U_k every m iterations to `checkpoint_dir` (0 disables).
  int checkpoint_every = 0;
  std::filesystem::path checkpoint_dir;
  /// Called after each recorded iterate.
  std::function<void(const IterationRecord&)> observer;
};

/// (sum_x w(x) (|U|^2 + |grad_h U|^2) h^2)^(1/2) over all nodes of the grid.
double weighted_h1_norm(const FourierField& U, const GridValues& weight);
double weighted_h1_norm(const FourierField& U, const CarlemanWeight& w);

/// Minimiser of the functional with the nonlinearity switched off.
FourierField init_U0(const EllipticSolver& solver, const BoundaryVectors& data);

/// J(U) with the nonlinearity evaluated at U itself (monitoring cost).
double monitoring_cost(const EllipticSolver& solver, const ForcingEvaluator& forcing,
                       const FourierField& U);

/// U_k = Phi(U_{k-1}) starting from the linear solution; records J and iterate differences.
/// Throws DivergenceError if the divergence guard trips.
RunHistory iterate(const EllipticSolver& solver, const ForcingEvaluator& forcing,
                   const BoundaryVectors& data, const GridValues& weight,
                   const IterationOptions& options = {});

/// Same, starting from a given admissible U_0.
RunHistory iterate_from(const EllipticSolver& solver, const ForcingEvaluator& forcing,
                        const BoundaryVectors& data, const GridValues& weight,
                        const FourierField& u0, const IterationOptions& options = {});

/// Ratios d_k / d_{k-1} of consecutive iterate differences, for k >= 2.
std::vector<double> contraction_ratios(const RunHistory& history);

}  // namespace hyperinv
