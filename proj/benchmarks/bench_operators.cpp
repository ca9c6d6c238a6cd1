#include <benchmark/benchmark.h>

#include <random>

#include "tfpl/function_operator.hpp"
#include "tfpl/grid_operator.hpp"
#include "tfpl/radial_operator.hpp"
#include "tfpl/solver.hpp"

using namespace tfpl;

namespace {

OperatorParams logistic_params() {
  OperatorParams p;
  p.n = 2;
  p.s = 0.5;
  p.p = 2.5;
  p.lambda = 0.1;
  p.f = TemperingFunction::identity();
  return p;
}

}  // namespace

static void BM_GridEvalAll(benchmark::State& state) {
  const auto g = make_grid(2, 1.0 / static_cast<double>(state.range(0)));
  const GridOperator op(g, logistic_params());
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const GridField u = GridField::sample(g, [&](const Point&) { return U(rng); });
  for (auto _ : state) benchmark::DoNotOptimize(op.eval_all(u));
  state.counters["nodes"] = static_cast<double>(g->interior_nodes().size());
}
BENCHMARK(BM_GridEvalAll)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_RadialEvalAll(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const RadialField u = RadialField::sample(2, M, [](double r) { return 0.5 * (1.0 - r * r); });
  const RadialOperator op(u, logistic_params());
  for (auto _ : state) benchmark::DoNotOptimize(op.eval_all(u));
}
BENCHMARK(BM_RadialEvalAll)->Arg(64)->Arg(96)->Unit(benchmark::kMicrosecond);

static void BM_RadialOperatorSetup(benchmark::State& state) {
  const RadialField u = RadialField::uniform(2, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(RadialOperator(u, logistic_params()));
}
BENCHMARK(BM_RadialOperatorSetup)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_FunctionEval(benchmark::State& state) {
  const auto phi = barrier_function(0.5);
  const OperatorParams p = logistic_params();
  const Point x{0.6, 0.0, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(eval_function(phi, x, p));
}
BENCHMARK(BM_FunctionEval)->Unit(benchmark::kMillisecond);

static void BM_SolverStep(benchmark::State& state) {
  SimulationConfig c;
  c.params = logistic_params();
  c.reaction = ReactionTerm::logistic();
  c.layout = Layout::radial;
  c.h = 1.0 / 64;
  const Solver solver(c);
  const Field u = solver.initial_field();
  const double dt = solver.stable_dt(u);
  for (auto _ : state) benchmark::DoNotOptimize(solver.step(u, 0.0, dt));
}
BENCHMARK(BM_SolverStep)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
