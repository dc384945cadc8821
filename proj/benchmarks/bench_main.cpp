#include <benchmark/benchmark.h>

#include <map>

#include "unseen/estimators.hpp"
#include "unseen/frequency_table.hpp"
#include "unseen/mixture.hpp"
#include "unseen/numerics.hpp"
#include "unseen/predictors.hpp"
#include "unseen/rng.hpp"
#include "unseen/simulator.hpp"

namespace {

using namespace unseen;

// geometric-ish synthetic table: n_k rows halving per multiplicity
FrequencyTable synthetic_table(int width, double scale) {
  std::map<int, double> entries;
  double count = scale;
  for (int k = 1; k <= width; ++k) {
    entries[k] = static_cast<double>(static_cast<long long>(count) + 1);
    count *= 0.5;
  }
  return FrequencyTable(entries);
}

void BM_EstimateAll(benchmark::State& state) {
  const auto table = synthetic_table(static_cast<int>(state.range(0)), 1000.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(estimators::estimate_all(table));
}
BENCHMARK(BM_EstimateAll)->Arg(5)->Arg(10)->Arg(20);

void BM_MleTotal(benchmark::State& state) {
  const auto table = synthetic_table(10, 1000.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(estimators::mle_total(table));
}
BENCHMARK(BM_MleTotal);

// n <= 500 runs the exact big-integer path, larger n the log-space path
void BM_StirlingRatio(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(numerics::stirling2_ratio(n, n / 2));
}
BENCHMARK(BM_StirlingRatio)->Arg(50)->Arg(200)->Arg(500)->Arg(501)->Arg(1000);

void BM_QuadratureCountLaw(benchmark::State& state) {
  const auto mix = MixtureSpec::gamma(2.0, 2.0);
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(simulator::pk_mixture_quadrature(mix, 1.0, k));
}
BENCHMARK(BM_QuadratureCountLaw)->Arg(0)->Arg(5)->Arg(25);

void BM_Projection(benchmark::State& state) {
  const auto table = synthetic_table(static_cast<int>(state.range(0)), 100000.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(predictors::mnatsakanian_project(table, 1.0, 0.5));
}
BENCHMARK(BM_Projection)->Arg(10)->Arg(40);

void BM_SimulateLog(benchmark::State& state) {
  simulator::SimConfig config;
  config.population = state.range(0);
  config.horizon = 1.0;
  config.mixture = MixtureSpec::gamma(2.0, 2.0);
  config.seed = 7;
  int replication = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(simulator::simulate_log(config, replication++));
}
BENCHMARK(BM_SimulateLog)->Arg(100)->Arg(1000)->Arg(10000);

void BM_StreamU64(benchmark::State& state) {
  rng::Stream stream(1, 2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(stream.next_u64());
}
BENCHMARK(BM_StreamU64);

}  // namespace

BENCHMARK_MAIN();
