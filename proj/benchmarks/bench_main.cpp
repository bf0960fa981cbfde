#include <benchmark/benchmark.h>

#include "colorlab/asymptotics.hpp"
#include "colorlab/exact_count.hpp"
#include "colorlab/expectations.hpp"
#include "colorlab/limit_law.hpp"
#include "colorlab/observables.hpp"
#include "colorlab/sampling.hpp"

namespace {

void BM_CountDp(benchmark::State& state) {
  const colorlab::ModelParams params{3, 2.0, static_cast<int>(state.range(0))};
  const auto g = colorlab::sample_gnm_simple(params, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(colorlab::count_dp(g, 3));
  }
}
BENCHMARK(BM_CountDp)->Arg(20)->Arg(40);

void BM_CountBruteforce(benchmark::State& state) {
  const colorlab::ModelParams params{3, 2.0, static_cast<int>(state.range(0))};
  const auto g = colorlab::sample_gnm_multigraph(params, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(colorlab::count_bruteforce(g, 3));
  }
}
BENCHMARK(BM_CountBruteforce)->Arg(8)->Arg(12);

void BM_CycleCensus(benchmark::State& state) {
  const colorlab::ModelParams params{3, 2.0, static_cast<int>(state.range(0))};
  const auto g = colorlab::sample_gnm_multigraph(params, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(colorlab::cycle_census(g, 5));
  }
}
BENCHMARK(BM_CycleCensus)->Arg(500)->Arg(2000);

void BM_ExpectedCount(benchmark::State& state) {
  const colorlab::ModelParams params{3, 2.0, static_cast<int>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(colorlab::expected_count(params, colorlab::Ensemble::multigraph));
  }
}
BENCHMARK(BM_ExpectedCount)->Arg(40)->Arg(160);

void BM_ExpectedPairCount(benchmark::State& state) {
  const colorlab::ModelParams params{3, 2.0, static_cast<int>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(colorlab::expected_pair_count(params));
  }
}
BENCHMARK(BM_ExpectedPairCount)->Arg(12)->Arg(16);

void BM_FluctuationSample(benchmark::State& state) {
  const colorlab::FluctuationLaw law{2.0, 3, 0, 1e-6};
  colorlab::Rng rng(11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(colorlab::sample_fluctuation(law, rng));
  }
}
BENCHMARK(BM_FluctuationSample);

void BM_GaussianLatticeSum(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(colorlab::gaussian_lattice_sum(
        2.0, 2, state.range(0), colorlab::LatticeSumMode::exact));
  }
}
BENCHMARK(BM_GaussianLatticeSum)->Arg(400)->Arg(1600);

}  // namespace

BENCHMARK_MAIN();
