#include "hyperinv/carleman.hpp"
#include "hyperinv/contraction.hpp"
#include "hyperinv/elliptic_step.hpp"
#include "hyperinv/forward.hpp"
#include "hyperinv/time_basis.hpp"

#include <benchmark/benchmark.h>

using namespace hyperinv;

namespace {

const TimeBasis& basis20() {
  static const TimeBasis b = build_basis(20, 2.0, TimeGrid(2.0, 256));
  return b;
}

FourierField smooth_field(const SpatialGrid& g, int N) {
  FourierField U(g, N);
  for (int j = 0; j < g.n(); ++j)
    for (int i = 0; i < g.n(); ++i) {
      const Point2 x = g.point(i, j);
      for (int m = 0; m < N; ++m) U.values()(g.index(i, j), m) = (0.5 + 0.1 * x.x1 * x.x2) / (1.0 + m * m);
    }
  return U;
}

}  // namespace

static void BM_BuildBasis(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_basis(N, 2.0, TimeGrid(2.0, 256)));
}
BENCHMARK(BM_BuildBasis)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_ForwardSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SpatialGrid omega(1.0, n), G(4.0, 4 * (n - 1) + 1);
  const GridValues c = extend_by_zero(make_phantom(PhantomSpec{}, omega), omega, G);
  WaveOptions o;
  o.record = omega;
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_wave(c, Nonlinearity::sqrt_grad(), InitialField::constant(0.5), G,
                                        TimeGrid(2.0, 256), o));
}
BENCHMARK(BM_ForwardSolve)->Arg(33)->Arg(65)->Unit(benchmark::kMillisecond);

static void BM_ProjectRows(benchmark::State& state) {
  const Eigen::MatrixXd series = Eigen::MatrixXd::Random(256, 257);
  for (auto _ : state) benchmark::DoNotOptimize(project_rows(series, basis20()));
}
BENCHMARK(BM_ProjectRows);

static void BM_ForcingEvaluate(benchmark::State& state) {
  const SpatialGrid g(1.0, static_cast<int>(state.range(0)));
  const ForcingEvaluator fe(basis20(), Nonlinearity::sqrt_grad(), InitialField::constant(0.5), g);
  const FourierField V = smooth_field(g, 20);
  for (auto _ : state) benchmark::DoNotOptimize(fe.evaluate(V));
}
BENCHMARK(BM_ForcingEvaluate)->Arg(33)->Arg(65)->Unit(benchmark::kMillisecond);

static void BM_AssembleAndFactor(benchmark::State& state) {
  const SpatialGrid g(1.0, static_cast<int>(state.range(0)));
  const GridValues w = weight_grid(g, CarlemanWeight{});
  for (auto _ : state) {
    const EllipticSolver solver(g, basis20().stiffness(), w, EllipticOptions{});
    benchmark::DoNotOptimize(solver.normal_nonzeros());
  }
}
BENCHMARK(BM_AssembleAndFactor)->Arg(17)->Arg(33)->Unit(benchmark::kMillisecond)->Iterations(1);

static void BM_Minimize(benchmark::State& state) {
  const SpatialGrid g(1.0, static_cast<int>(state.range(0)));
  const GridValues w = weight_grid(g, CarlemanWeight{});
  const EllipticSolver solver(g, basis20().stiffness(), w, EllipticOptions{});
  const BoundaryLayout layout(g);
  const BoundaryVectors data{Eigen::MatrixXd::Constant(layout.rows(), 20, 0.1), Eigen::MatrixXd::Zero(layout.rows(), 20)};
  const Eigen::MatrixXd q = Eigen::MatrixXd::Random(solver.ops().interior_count(), 20);
  for (auto _ : state) benchmark::DoNotOptimize(solver.minimize(q, data));
}
BENCHMARK(BM_Minimize)->Arg(17)->Arg(33)->Unit(benchmark::kMillisecond);

static void BM_WeightedH1Norm(benchmark::State& state) {
  const SpatialGrid g(1.0, 65);
  const GridValues w = weight_grid(g, CarlemanWeight{});
  const FourierField U = smooth_field(g, 20);
  for (auto _ : state) benchmark::DoNotOptimize(weighted_h1_norm(U, w));
}
BENCHMARK(BM_WeightedH1Norm);
BENCHMARK_MAIN();
