#include <benchmark/benchmark.h>

#include "threshold_lab/certifier.hpp"
#include "threshold_lab/cover_solver.hpp"
#include "threshold_lab/families.hpp"
#include "threshold_lab/fragmentation.hpp"
#include "threshold_lab/product_measure.hpp"
#include "threshold_lab/thresholds.hpp"

using namespace threshold_lab;

static void BM_CoverSubsetDp(benchmark::State& state) {
  const auto h = random_family(16, static_cast<std::size_t>(state.range(0)), 3, 7);
  const auto q = ProbVector::uniform(16, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(exact_cost(h, q).cost);
}
BENCHMARK(BM_CoverSubsetDp)->Arg(8)->Arg(14)->Arg(20);

static void BM_CoverBranchAndBound(benchmark::State& state) {
  const auto h = random_family(14, static_cast<std::size_t>(state.range(0)), 3, 11);
  const auto q = ProbVector::uniform(14, 0.3);
  Caps caps;
  caps.dp_members = 0;
  for (auto _ : state) benchmark::DoNotOptimize(exact_cost(h, q, caps).cost);
}
BENCHMARK(BM_CoverBranchAndBound)->Arg(10)->Arg(20)->Arg(28);

static void BM_CoverGreedy(benchmark::State& state) {
  const auto h = random_family(20, 40, 4, 3);
  const auto q = ProbVector::uniform(20, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(greedy_cost(h, q).cost);
}
BENCHMARK(BM_CoverGreedy);

static void BM_ProbExact(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto h = random_family(n, 12, 3, 5);
  const auto p = ProbVector::uniform(n, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(prob_upset_exact(h, p));
}
BENCHMARK(BM_ProbExact)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_ProbMonteCarlo(benchmark::State& state) {
  const auto h = random_family(30, 20, 4, 5);
  const auto p = ProbVector::uniform(30, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(prob_upset_mc(h, p, 100000, 1, 0.99, static_cast<int>(state.range(0))).point);
}
BENCHMARK(BM_ProbMonteCarlo)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_ExpectationThreshold(benchmark::State& state) {
  const auto h = clique_family(5, 3);
  for (auto _ : state) benchmark::DoNotOptimize(expectation_threshold(h, 1e-6).lo);
}
BENCHMARK(BM_ExpectationThreshold)->Unit(benchmark::kMillisecond);

static void BM_ProcessRun(benchmark::State& state) {
  const auto h = random_family(12, 10, 4, 9);
  const auto q = ProbVector::uniform(12, 0.1);
  std::uint64_t trial = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_process(h, q, Schedule::standard(), 1, trial++, state.range(0) != 0).event_e);
}
BENCHMARK(BM_ProcessRun)->Arg(0)->Arg(1);

static void BM_CertifySeries(benchmark::State& state) {
  const int exact_limit = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(series_rhs(Schedule::standard(), 30, exact_limit).below_half);
}
BENCHMARK(BM_CertifySeries)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

static void BM_ClosedForm(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(closed_form_L6().below_half);
}
BENCHMARK(BM_ClosedForm)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
