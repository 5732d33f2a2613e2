#include <benchmark/benchmark.h>

#include "graphon/rng.hpp"
#include "graphon/sampler.hpp"
#include "graphon/scaling.hpp"
#include "graphon/search.hpp"

namespace {

graphon::WeightedGraph random_graph(int n, std::uint64_t seed) {
    graphon::Rng rng = graphon::make_rng(seed);
    graphon::Matrix beta(n, n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) beta(i, j) = beta(j, i) = graphon::uniform01(rng);
    return graphon::WeightedGraph::uniform(std::move(beta), true);
}

void BM_FractionalBlowup(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto g = random_graph(n, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(graphon::fractional_blowup(g, 2 * n + n / 2).first.size());
}
BENCHMARK(BM_FractionalBlowup)->Arg(16)->Arg(64);

void BM_SampleSimple(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto g = random_graph(n, 1);
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(graphon::sample_simple(g, seed++).size());
}
BENCHMARK(BM_SampleSimple)->Arg(64)->Arg(256);

void BM_GumbelDraws(benchmark::State& state) {
    graphon::Rng rng = graphon::make_rng(9);
    const std::vector<double> pi{0.7, 0.2, 0.1};
    for (auto _ : state)
        benchmark::DoNotOptimize(graphon::gumbel_softmax(pi, 0.5, rng)[0]);
}
BENCHMARK(BM_GumbelDraws);

}  // namespace
