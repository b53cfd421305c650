// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>

#include "m2msim/engine.hpp"
#include "m2msim/graphalloc.hpp"

namespace {

m2m::DropConfig BenchConfig(std::size_t drops) {
  m2m::DropConfig config;
  config.layout.numSites = 7;
  config.numDrops = drops;
  return config;
}

void BM_CampaignSerial(benchmark::State& state) {
  const auto config = BenchConfig(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(m2m::RunCampaignSerial(config));
  }
}

void BM_CampaignParallel(benchmark::State& state) {
  const auto config = BenchConfig(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(m2m::RunCampaign(config, static_cast<int>(state.range(1))));
  }
}

m2m::InterferenceGraph RandomGraph(std::size_t n, double p) {
  m2m::InterferenceGraph g = m2m::InterferenceGraph::Empty(n);
  std::mt19937_64 rng(42);
  std::bernoulli_distribution edge(p);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (edge(rng)) {
        g.AddEdge(u, v);
      }
    }
  }
  return g;
}

void BM_ColoringSerial(benchmark::State& state) {
  const auto graph = RandomGraph(static_cast<std::size_t>(state.range(0)), 0.05);
  m2m::ColoringParams params;
  params.numColors = 8;
  for (auto _ : state) {
    benchmark::DoNotOptimize(m2m::RunDistributedColoringSerial(graph, params, 7));
  }
}

void BM_ColoringParallel(benchmark::State& state) {
  const auto graph = RandomGraph(static_cast<std::size_t>(state.range(0)), 0.05);
  m2m::ColoringParams params;
  params.numColors = 8;
  for (auto _ : state) {
    benchmark::DoNotOptimize(m2m::RunDistributedColoring(graph, params, 7));
  }
}

}  // namespace

BENCHMARK(BM_CampaignSerial)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CampaignParallel)->Args({8, 2})->Args({8, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ColoringSerial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ColoringParallel)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
