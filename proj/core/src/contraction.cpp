#include "hyperinv/contraction.hpp"

#include "hyperinv/errors.hpp"
#include "hyperinv/io.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace hyperinv {

double weighted_h1_norm(const FourierField& U, const GridValues& weight) {
  const SpatialGrid& grid = U.grid();
  if (weight.size() != grid.size()) throw InvalidArgument("weight grid does not match the field");
  const DiscreteOperators ops(grid);
  const FieldMatrix G1 = ops.grad1() * U.values();
  const FieldMatrix G2 = ops.grad2() * U.values();
  double sum = 0.0;
  for (int j = 0; j < grid.n(); ++j)
    for (int i = 0; i < grid.n(); ++i) {
      const int k = grid.index(i, j);
      sum += weight[k] * grid.quadrature_weight(i, j) *
             (U.values().row(k).squaredNorm() + G1.row(k).squaredNorm() + G2.row(k).squaredNorm());
    }
  return std::sqrt(sum);
}

double weighted_h1_norm(const FourierField& U, const CarlemanWeight& w) {
  return weighted_h1_norm(U, weight_grid(U.grid(), w));
}

FourierField init_U0(const EllipticSolver& solver, const BoundaryVectors& data) {
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(solver.ops().interior_count(), solver.count());
  return solver.minimize(zero, data);
}

double monitoring_cost(const EllipticSolver& solver, const ForcingEvaluator& forcing,
                       const FourierField& U) {
  return solver.objective(U, forcing.evaluate(U));
}

RunHistory iterate(const EllipticSolver& solver, const ForcingEvaluator& forcing,
                   const BoundaryVectors& data, const GridValues& weight,
                   const IterationOptions& options) {
  return iterate_from(solver, forcing, data, weight, init_U0(solver, data), options);
}

RunHistory iterate_from(const EllipticSolver& solver, const ForcingEvaluator& forcing,
                        const BoundaryVectors& data, const GridValues& weight,
                        const FourierField& u0, const IterationOptions& options) {
  using Clock = std::chrono::steady_clock;
  if (options.max_iterations < 0) throw InvalidArgument("max_iterations must be non-negative");
  if (!u0.is_finite()) throw InvalidArgument("initial iterate is not finite");

  RunHistory history;
  history.u0 = u0;
  CutoffBound bound;
  bound.enabled = options.use_cutoff;
  if (options.use_cutoff) {
    bound.M = options.cutoff_M > 0.0 ? options.cutoff_M : 10.0 * forcing.magnitude(u0).maxCoeff();
    // A vanishing U_0 (zero data) still needs a positive bound.
    if (!(bound.M > 0.0)) bound.M = 1.0;
  }
  history.cutoff_M = bound.M;

  auto record = [&](const IterationRecord& rec, const FourierField& U) {
    if (!std::isfinite(rec.cost) || !std::isfinite(rec.iterate_diff)) {
      std::ostringstream os;
      os << "non-finite cost or iterate difference at k = " << rec.k;
      throw Error(os.str());
    }
    history.records.push_back(rec);
    if (options.observer) options.observer(rec);
    if (options.checkpoint_every > 0 && rec.k % options.checkpoint_every == 0) {
      std::filesystem::create_directories(options.checkpoint_dir);
      std::ostringstream name;
      name << "U_" << rec.k << ".bin";
      write_field_binary(options.checkpoint_dir / name.str(), U, rec.k);
    }
  };

  auto t0 = Clock::now();
  FourierField current = u0;
  const double j0 = monitoring_cost(solver, forcing, current);
  record({0, j0, 0.0, std::chrono::duration<double>(Clock::now() - t0).count()}, current);

  int stable = 0;
  for (int k = 1; k <= options.max_iterations; ++k) {
    const auto start = Clock::now();
    FourierField next = solver.minimize(forcing.evaluate_cut(current, bound), data);
    const double jk = monitoring_cost(solver, forcing, next);
    FourierField diff(next.grid(), FieldMatrix(next.values() - current.values()));
    const double dk = weighted_h1_norm(diff, weight);
    const double prev_cost = history.records.back().cost;
    current = std::move(next);
    record({k, jk, dk, std::chrono::duration<double>(Clock::now() - start).count()}, current);

    if (j0 > 0.0 && jk > options.divergence_factor * j0) throw DivergenceError(k, jk, j0);
    if (options.stop_on_stabilization) {
      stable = std::abs(jk - prev_cost) <= options.stabilization_tol * prev_cost ? stable + 1 : 0;
      if (stable >= options.stabilization_window) {
        history.stopped_early = k < options.max_iterations;
        break;
      }
    }
  }
  history.u_comp = current;
  return history;
}

std::vector<double> contraction_ratios(const RunHistory& history) {
  std::vector<double> out;
  for (std::size_t k = 2; k < history.records.size(); ++k) {
    const double prev = history.records[k - 1].iterate_diff;
    out.push_back(prev > 0.0 ? history.records[k].iterate_diff / prev : 0.0);
  }
  return out;
}

}  // namespace hyperinv
