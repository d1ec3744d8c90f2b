#include "synthetic.hpp"

#include <supplyrank/centrality.hpp>
#include <supplyrank/depgraph.hpp>
#include <supplyrank/gitmetrics.hpp>
#include <supplyrank/stats.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace supplyrank;
namespace fx = supplyrank::testing;

namespace {

// Edges-per-node ratio of the reference distribution export.
constexpr double kEdgeRatio = 273'681.0 / 82'011.0;

fx::GraphSpec spec_for(benchmark::State& state)
{
    const auto nodes = static_cast<std::size_t>(state.range(0));
    return fx::scale_graph(1, nodes, static_cast<std::size_t>(static_cast<double>(nodes) * kEdgeRatio));
}

void BM_LoadGraph(benchmark::State& state)
{
    const std::string doc = fx::to_document(spec_for(state));
    for (auto _ : state) {
        benchmark::DoNotOptimize(load_graph(doc));
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * doc.size()));
}
BENCHMARK(BM_LoadGraph)->Arg(10'000)->Arg(82'011)->Unit(benchmark::kMillisecond);

void BM_Katz(benchmark::State& state)
{
    const auto g = fx::build(spec_for(state));
    for (auto _ : state) {
        benchmark::DoNotOptimize(katz_centrality(g));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * g.edge_count()));
}
BENCHMARK(BM_Katz)->Arg(10'000)->Arg(82'011)->Unit(benchmark::kMillisecond);

void BM_RankTop200(benchmark::State& state)
{
    const auto scores = katz_centrality(fx::build(spec_for(state)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(rank(scores, 200));
    }
}
BENCHMARK(BM_RankTop200)->Arg(82'011)->Unit(benchmark::kMicrosecond);

void BM_BoxStats(benchmark::State& state)
{
    std::mt19937_64 rng(3);
    std::lognormal_distribution<double> dist(9.0, 2.0);
    std::vector<double> values(static_cast<std::size_t>(state.range(0)));
    for (double& v : values) {
        v = dist(rng);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(box_stats(values));
    }
}
BENCHMARK(BM_BoxStats)->Arg(200)->Arg(100'000);

void BM_BusFactor(benchmark::State& state)
{
    std::mt19937_64 rng(4);
    std::geometric_distribution<int> author(0.05);
    std::vector<CommitRecord> commits(static_cast<std::size_t>(state.range(0)));
    for (auto& c : commits) {
        const int a = author(rng);
        c = {"dev" + std::to_string(a), "dev" + std::to_string(a) + "@example.org", {}};
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(bus_factor(commits));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * commits.size()));
}
BENCHMARK(BM_BusFactor)->Arg(1'000)->Arg(100'000);

} // namespace

BENCHMARK_MAIN();
