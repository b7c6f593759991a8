#include <benchmark/benchmark.h>

#include "hgr/mock_providers.hpp"
#include "hgr/retrieval.hpp"
#include "support/synthetic.hpp"

namespace {

const hgr::Index& balanced_index() {
    static hgr::Index index = synthetic::make_balanced_index(20, 10, 5, 32, 99);
    return index;
}

hgr::Providers& providers() {
    static hgr::Providers p = hgr::make_mock_providers(32);
    return p;
}

} // namespace

// Coarse-to-fine beam descent over 10k entities.
static void BM_DeepRetrieve(benchmark::State& state) {
    const auto& index = balanced_index();
    hgr::RetrievalParams params;
    params.k = static_cast<int>(state.range(0));
    params.m = 10;
    for (auto _ : state) {
        auto result = hgr::retrieve("granite harbor ledger", index, providers(), params);
        benchmark::DoNotOptimize(result.scored_candidate_count);
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_DeepRetrieve)->Arg(1)->Arg(3)->Arg(8);

// Flat cosine scan over every entity, the baseline the beam search prunes.
static void BM_LocalSearch(benchmark::State& state) {
    const auto& index = balanced_index();
    for (auto _ : state) {
        auto result = hgr::local_search("granite harbor ledger", index, *providers().embedder, 10);
        benchmark::DoNotOptimize(result.entities);
    }
    state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_LocalSearch);

static void BM_MockEmbed(benchmark::State& state) {
    hgr::MockEmbedder embedder(static_cast<std::size_t>(state.range(0)));
    std::vector<std::string> texts(16, "copper river valley bridge signal meadow harbor");
    for (auto _ : state) {
        auto vs = embedder.embed(texts);
        benchmark::DoNotOptimize(vs);
    }
    state.SetItemsProcessed(state.iterations() * 16);
}
BENCHMARK(BM_MockEmbed)->Arg(64)->Arg(256)->Arg(1024);

BENCHMARK_MAIN();
