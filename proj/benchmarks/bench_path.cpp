#include <benchmark/benchmark.h>

#include "lassopath/direction.hpp"
#include "lassopath/fixtures.hpp"
#include "lassopath/homotopy.hpp"
#include "lassopath/oracle.hpp"

using namespace lassopath;

static void BM_GeneralizedGaussian(benchmark::State& state) {
  const Index m = state.range(0), n = state.range(1);
  const ProblemInstance inst = fixtures::gaussian(m, n, 1);
  std::size_t kinks = 0;
  for (auto _ : state) {
    const SolutionPath path = run_generalized(inst);
    kinks = path.kinks.size();
    benchmark::DoNotOptimize(kinks);
  }
  state.counters["kinks"] = static_cast<double>(kinks);
}
BENCHMARK(BM_GeneralizedGaussian)->Args({10, 20})->Args({20, 50})->Args({50, 100})->Args({100, 200});

static void BM_GeneralizedBernoulli(benchmark::State& state) {
  const ProblemInstance inst = fixtures::bernoulli(state.range(0), state.range(1), 3);
  for (auto _ : state) benchmark::DoNotOptimize(run_generalized(inst).kinks.size());
}
BENCHMARK(BM_GeneralizedBernoulli)->Args({20, 50})->Args({40, 100});

static void BM_StandardGaussian(benchmark::State& state) {
  const ProblemInstance inst = fixtures::gaussian(state.range(0), state.range(1), 1);
  for (auto _ : state) benchmark::DoNotOptimize(run_standard(inst).kinks.size());
}
BENCHMARK(BM_StandardGaussian)->Args({20, 50})->Args({50, 100});

static void BM_MinNormDirectionTied(benchmark::State& state) {
  // All correlations tie at t0 for a Bernoulli instance with a single-atom signal.
  const ProblemInstance inst = fixtures::bernoulli(4, state.range(0), 5);
  const Tolerances tol;
  const DirectionProblem prob = DirectionProblem::at(inst, inst.t0(), Vector::Zero(inst.cols()), tol);
  for (auto _ : state) benchmark::DoNotOptimize(generalized_direction(prob, tol).d.norm());
  state.counters["undecided"] = static_cast<double>(prob.constrained().size());
}
BENCHMARK(BM_MinNormDirectionTied)->Arg(16)->Arg(64);

static void BM_FistaOracle(benchmark::State& state) {
  const ProblemInstance inst = fixtures::gaussian(state.range(0), state.range(1), 2);
  for (auto _ : state) benchmark::DoNotOptimize(fista_solve(inst, 0.1 * inst.t0()).objective);
}
BENCHMARK(BM_FistaOracle)->Args({20, 50})->Args({50, 100});

static void BM_VerifyPath(benchmark::State& state) {
  const SolutionPath path = run_generalized(fixtures::gaussian(8, 12, 4));
  VerifyConfig cfg;
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(verify_path(path, cfg).pass);
}
BENCHMARK(BM_VerifyPath)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
