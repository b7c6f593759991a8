#include <benchmark/benchmark.h>

#include "hgr/dwgrpo.hpp"
#include "hgr/louvain.hpp"
#include "hgr/rng.hpp"
#include "hgr/seesaw_sim.hpp"
#include "support/synthetic.hpp"

static void BM_LouvainPartition(benchmark::State& state) {
    hgr::rng::Rng rng(7);
    auto g = synthetic::make_random_graph(rng, static_cast<std::size_t>(state.range(0)), 0.05, true);
    hgr::LouvainParams params;
    params.seed = 11;
    for (auto _ : state) {
        auto partition = hgr::louvain_partition(g.nodes, g.edges, params);
        benchmark::DoNotOptimize(partition);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LouvainPartition)->Arg(64)->Arg(256)->Arg(1024);

static void BM_FitSlope(benchmark::State& state) {
    hgr::rng::Rng rng(3);
    std::vector<double> series(static_cast<std::size_t>(state.range(0)));
    for (auto& v : series)
        v = rng.uniform();
    for (auto _ : state)
        benchmark::DoNotOptimize(hgr::fit_slope(series));
}
BENCHMARK(BM_FitSlope)->Arg(16)->Arg(64);

static void BM_WeightedAdvantage(benchmark::State& state) {
    hgr::rng::Rng rng(5);
    hgr::RolloutGroup group;
    for (int i = 0; i < 64; ++i)
        group.rewards.push_back({rng.uniform(), rng.uniform(), rng.uniform()});
    hgr::ObjVec weights{0.3, 0.4, 0.3};
    for (auto _ : state)
        benchmark::DoNotOptimize(hgr::weighted_advantage(group, weights));
}
BENCHMARK(BM_WeightedAdvantage);

static void BM_SimulatorStep(benchmark::State& state) {
    hgr::SimConfig config;
    config.steps = static_cast<int>(state.range(0));
    config.mode = hgr::SimMode::dynamic_weights;
    for (auto _ : state) {
        auto t = hgr::run_sim(config);
        benchmark::DoNotOptimize(t.final_rewards);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulatorStep)->Arg(60);

BENCHMARK_MAIN();
