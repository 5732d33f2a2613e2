#include <benchmark/benchmark.h>

#include "graphon/cut_distance.hpp"
#include "graphon/overlay.hpp"
#include "graphon/rng.hpp"

namespace {

graphon::WeightedGraph random_graph(int n, std::uint64_t seed) {
    graphon::Rng rng = graphon::make_rng(seed);
    graphon::Matrix beta(n, n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) beta(i, j) = beta(j, i) = graphon::uniform01(rng);
    return graphon::WeightedGraph::uniform(std::move(beta), true);
}

void BM_CutDistanceExact(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto a = random_graph(n, 1);
    const auto b = random_graph(n, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(graphon::cut_distance_exact(a, b).value);
}
BENCHMARK(BM_CutDistanceExact)->Arg(10)->Arg(14)->Arg(18);

void BM_CutDistanceLocalSearch(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto a = random_graph(n, 1);
    const auto b = random_graph(n, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(graphon::cut_distance_local_search(a, b, 20, 3).value);
}
BENCHMARK(BM_CutDistanceLocalSearch)->Arg(16)->Arg(64)->Arg(128);

void BM_OverlayEvaluation(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto a = random_graph(n, 1);
    const auto b = random_graph(n, 2);
    const auto L = graphon::interval_overlay(a, b);
    for (auto _ : state)
        benchmark::DoNotOptimize(graphon::overlay_distance(a, b, L).cut.value);
}
BENCHMARK(BM_OverlayEvaluation)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
