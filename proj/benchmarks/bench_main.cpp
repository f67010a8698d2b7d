#include <benchmark/benchmark.h>

#include "gkz/pipeline.hpp"

using namespace gkz;

namespace {

IntegerPointConfig example() { return IntegerPointConfig::from_rows({{1, 2, 3}}); }
IntegerPointConfig plane() { return IntegerPointConfig::from_rows({{1, 0, 2, 3}, {0, 1, 1, 3}}); }

void BM_ToricIdeal(benchmark::State& state) {
  const IntegerPointConfig h = homogenize(state.range(0) == 0 ? example() : plane());
  for (auto _ : state) benchmark::DoNotOptimize(toric_ideal(h));
}
BENCHMARK(BM_ToricIdeal)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_Solve(benchmark::State& state) {
  const IntegerPointConfig a = state.range(0) == 0 ? example() : plane();
  for (auto _ : state) benchmark::DoNotOptimize(solve(a, PipelineConfig{}));
}
BENCHMARK(BM_Solve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

// one branch of (1 2 3) at a fixed generic s, truncation as the argument
void BM_EvaluateBranch(benchmark::State& state) {
  const SolveResult r = solve(example(), PipelineConfig{});
  const EvaluationPoint p = choose_evaluation_point(r.a, r.weight.weight.entries, r.triangulation.simplices);
  const RationalVector s{Rational(13, 97)};
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(r.branches[0].evaluate(s, p.x, n));
}
BENCHMARK(BM_EvaluateBranch)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMicrosecond);

void BM_Independence(benchmark::State& state) {
  const PipelineConfig cfg;
  const SolveResult r = solve(plane(), cfg);
  const RationalVector s = sample_parameter(r, cfg);
  const EvaluationPoint p = choose_evaluation_point(r.a, r.weight.weight.entries, r.triangulation.simplices);
  for (auto _ : state) benchmark::DoNotOptimize(independence(r, cfg, s, p));
}
BENCHMARK(BM_Independence)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
