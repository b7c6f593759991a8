#include <doctest.h>

#include "hgr/error.hpp"
#include "hgr/hierarchy.hpp"
#include "hgr/mock_providers.hpp"
#include "hgr/retrieval.hpp"
#include "hgr/text.hpp"
#include "hgr/vec.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace hgr;

namespace {

// Counting decorator used to confirm scored_candidate_count honesty.
struct CountingReranker final : Reranker {
    Reranker& inner;
    std::size_t calls = 0;
    explicit CountingReranker(Reranker& r) : inner(r) {}
    double rerank(const std::string& q, const std::string& d) override {
        ++calls;
        return inner.rerank(q, d);
    }
};

Index two_level_fixture() {
    // 3 top communities, 6 mid, 12 level-1 leaves, 24 entities.
    return synthetic::make_balanced_index(3, 2, 2, 8, /*seed=*/21);
}

} // namespace

TEST_CASE("phase1: all top communities scored, top-k kept, ties by id") {
    auto index = two_level_fixture();
    MockReranker reranker(8);

    PhaseTrace trace;
    auto beam = phase1_top("copper river", index, reranker, 2, &trace);
    CHECK(beam.level == 3);
    CHECK(beam.candidates.size() == 2);
    CHECK(trace.scored.size() == 3); // every top community was scored

    // With k larger than the level, everything comes back sorted.
    auto all = phase1_top("copper river", index, reranker, 99);
    CHECK(all.candidates.size() == 3);
    for (std::size_t i = 1; i < all.candidates.size(); ++i) {
        bool ordered = all.candidates[i - 1].score > all.candidates[i].score ||
                       (all.candidates[i - 1].score == all.candidates[i].score &&
                        all.candidates[i - 1].id < all.candidates[i].id);
        CHECK(ordered);
    }

    // Top-k of the mock scores, independently recomputed.
    std::vector<BeamCandidate> expect;
    for (const auto& [id, c] : index.hierarchy.top_level())
        expect.push_back({id, reranker.rerank("copper river", c.summary)});
    rank_candidates(expect, 2);
    CHECK(beam.candidates == expect);
}

TEST_CASE("phase1: single community beams regardless of k") {
    auto index = synthetic::make_balanced_index(1, 1, 3, 8, 4);
    MockReranker reranker(8);
    auto beam = phase1_top("anything", index, reranker, 3);
    CHECK(beam.candidates.size() == 1);
}

TEST_CASE("phase2: pooled children, global top-k") {
    auto index = two_level_fixture();
    MockReranker reranker(8);
    auto beam = phase1_top("harbor lantern", index, reranker, 3);

    PhaseTrace trace;
    auto mid = phase2_mid("harbor lantern", beam, index, reranker, 3, &trace);
    CHECK(mid.level == 2);
    CHECK(trace.scored.size() == 6); // 3 parents x 2 children pooled
    CHECK(mid.candidates.size() == 3);

    // Global top-3 of all 9 pooled scores (here 6), recomputed directly.
    std::vector<BeamCandidate> expect;
    for (const auto& parent : beam.candidates) {
        const Community* p = index.hierarchy.find(parent.id);
        for (const auto& child_id : p->members) {
            const Community* child = index.hierarchy.find(child_id);
            expect.push_back(
                {child_id, reranker.rerank("harbor lantern", p->summary + "\n" + child->summary)});
        }
    }
    rank_candidates(expect, 3);
    CHECK(mid.candidates == expect);
}

TEST_CASE("phase2: fewer children than k all survive") {
    auto index = synthetic::make_balanced_index(1, 2, 2, 8, 9);
    MockReranker reranker(8);
    Beam beam;
    beam.level = 3;
    beam.candidates = {{index.hierarchy.top_level().begin()->first, 1.0}};
    auto mid = phase2_mid("q", beam, index, reranker, 3);
    CHECK(mid.candidates.size() == 2);
}

TEST_CASE("phase2: childless community passes through") {
    auto index = two_level_fixture();
    MockReranker reranker(8);
    // Hand the phase a level-1 community: it has entities, not
    // sub-communities, so it must pass through as its own candidate.
    std::string leaf = index.hierarchy.levels[0].begin()->first;
    Beam beam;
    beam.level = 1;
    beam.candidates = {{leaf, 0.5}};
    auto out = phase2_mid("q", beam, index, reranker, 3);
    REQUIRE(out.candidates.size() == 1);
    CHECK(out.candidates[0].id == leaf);
}

TEST_CASE("phase2: empty beam is an error") {
    auto index = two_level_fixture();
    MockReranker reranker(8);
    CHECK_THROWS_AS(phase2_mid("q", Beam{}, index, reranker, 3), ValidationError);
}

TEST_CASE("context_vector concatenates entity and parent vectors") {
    Index index;
    Entity e;
    e.id = "e000001";
    e.name = "A";
    e.embedding = {1.f, 0.f};
    index.graph.entities.emplace(e.id, e);
    index.hierarchy.levels.resize(1);
    Community c{"c1_0001", 1, {"e000001"}, "s", {0.f, 1.f}};
    index.hierarchy.levels[0].emplace(c.id, c);
    index.hierarchy.parent["e000001"] = "c1_0001";

    auto ctx = context_vector(index.graph.entities.at("e000001"), index);
    CHECK(ctx == std::vector<float>{1.f, 0.f, 0.f, 1.f});

    // d=4 inputs produce a length-8 vector.
    index.graph.entities.at("e000001").embedding = {0.5f, 0.5f, 0.5f, 0.5f};
    index.hierarchy.levels[0].at("c1_0001").representation = {1.f, 0.f, 0.f, 0.f};
    CHECK(context_vector(index.graph.entities.at("e000001"), index).size() == 8);

    Entity orphan;
    orphan.id = "e000009";
    orphan.embedding = {1.f, 0.f};
    CHECK_THROWS_AS(context_vector(orphan, index), ValidationError);
}

TEST_CASE("phase3: parallel query and context vectors score 1") {
    Index index;
    Entity e;
    e.id = "e000001";
    e.name = "A";
    e.description = "alpha";
    e.embedding = {1.f, 0.f};
    index.graph.entities.emplace(e.id, e);
    index.graph.dimension = 2;
    index.hierarchy.levels.resize(1);
    Community c{"c1_0001", 1, {"e000001"}, "s", {1.f, 0.f}};
    index.hierarchy.levels[0].emplace(c.id, c);
    index.hierarchy.parent["e000001"] = "c1_0001";

    // Embedder stub returning a fixed vector for any text.
    struct FixedEmbedder final : Embedder {
        std::vector<std::vector<float>> embed(const std::vector<std::string>& texts) override {
            return std::vector<std::vector<float>>(texts.size(), {1.f, 0.f});
        }
        std::size_t dimension() const override { return 2; }
    } embedder;

    Beam beam;
    beam.level = 1;
    beam.candidates = {{"c1_0001", 1.0}};
    auto ranked = phase3_entities("q", beam, index, embedder, 5);
    REQUIRE(ranked.size() == 1);
    CHECK(ranked[0].id == "e000001");
    CHECK(ranked[0].score == doctest::Approx(1.0));
}

TEST_CASE("phase3: top-m against exhaustive scoring of the candidates") {
    auto index = two_level_fixture();
    MockEmbedder embedder(8);
    MockReranker reranker(8);
    auto beam = phase1_top("quarry summit", index, reranker, 99);
    while (true) {
        bool has_upper = false;
        for (const auto& c : beam.candidates)
            if (index.hierarchy.find(c.id)->level >= 2)
                has_upper = true;
        if (!has_upper)
            break;
        beam = phase2_mid("quarry summit", beam, index, reranker, 99);
    }

    auto top2 = phase3_entities("quarry summit", beam, index, embedder, 2);
    auto q = embedder.embed_one("quarry summit");
    auto expect = oracles::exhaustive_entity_ranking(q, index, 2);
    CHECK(top2 == expect);

    // 2d consistency: every context vector has twice the embedding width.
    for (const auto& [id, e] : index.graph.entities)
        CHECK(context_vector(e, index).size() == 2 * index.graph.dimension);
}

TEST_CASE("phase4: identity integrator returns the truncated context document") {
    auto index = two_level_fixture();
    MockEmbedder embedder(8);
    MockReranker reranker(8);
    Beam beam = phase1_top("meadow", index, reranker, 99);
    while (index.hierarchy.find(beam.candidates[0].id)->level >= 2)
        beam = phase2_mid("meadow", beam, index, reranker, 99);
    auto entities = phase3_entities("meadow", beam, index, embedder, 4);

    IdentityGenerator integrator(1 << 20);
    auto context = assemble_context(entities, index, 4000);
    CHECK(phase4_integrate(entities, index, integrator, 4000) == context);
}

TEST_CASE("phase4: shared relations and parents appear exactly once") {
    Index index;
    for (int i = 1; i <= 2; ++i) {
        Entity e;
        e.id = synthetic::padded("e", static_cast<std::size_t>(i));
        e.name = "N" + std::to_string(i);
        e.description = "desc" + std::to_string(i);
        e.embedding = {1.f, 0.f};
        index.graph.entities.emplace(e.id, e);
    }
    index.graph.dimension = 2;
    index.graph.relations.push_back({"r000001", "e000001", "e000002", "shared relation text", 1.0});
    index.hierarchy.levels.resize(1);
    Community c{"c1_0001", 1, {"e000001", "e000002"}, "the shared parent summary", {1.f, 0.f}};
    index.hierarchy.levels[0].emplace(c.id, c);
    index.hierarchy.parent["e000001"] = "c1_0001";
    index.hierarchy.parent["e000002"] = "c1_0001";

    auto context = assemble_context({{"e000001", 0.9}, {"e000002", 0.8}}, index, 4000);
    auto count = [&context](const std::string& needle) {
        std::size_t n = 0, pos = 0;
        while ((pos = context.find(needle, pos)) != std::string::npos) {
            ++n;
            pos += needle.size();
        }
        return n;
    };
    CHECK(count("shared relation text") == 1);
    CHECK(count("the shared parent summary") == 1);
    CHECK(count("desc1") == 1);
    CHECK(count("desc2") == 1);

    // Budget truncation.
    CHECK(text::token_count(assemble_context({{"e000001", 0.9}}, index, 3)) == 3);
}

TEST_CASE("retrieve: wide beams reproduce exhaustive scoring end to end") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        auto index = synthetic::make_random_index(
            {.seed = seed, .entities = 10 + seed * 5, .max_levels = 3, .dim = 8});
        auto providers = make_mock_providers(8);

        int max_width = 0;
        for (const auto& level : index.hierarchy.levels)
            max_width = std::max(max_width, static_cast<int>(level.size()));

        RetrievalParams params;
        params.k = max_width;
        params.m = 5;
        auto result = retrieve("river market signal", index, providers, params);

        auto q = providers.embedder->embed_one("river market signal");
        auto expect = oracles::exhaustive_entity_ranking(q, index, params.m);
        CHECK(result.entities == expect);
        CHECK(result.integrated);
        CHECK(result.answer == result.context_document); // identity integrator
    }
}

TEST_CASE("retrieve: deterministic and instrumented") {
    auto index = synthetic::make_balanced_index(4, 3, 3, 8, 33);
    auto providers = make_mock_providers(8);

    auto r1 = retrieve("harbor beacon", index, providers, {.k = 3, .m = 6});
    auto r2 = retrieve("harbor beacon", index, providers, {.k = 3, .m = 6});
    CHECK(r1.entities == r2.entities);
    CHECK(r1.context_document == r2.context_document);
    CHECK(r1.scored_candidate_count == r2.scored_candidate_count);

    // Counter decorators agree with the reported number.
    CountingReranker fast(*providers.reranker_fast);
    CountingReranker fine(*providers.reranker_fine);
    Providers counted = providers;
    struct Shim final : Reranker {
        CountingReranker& c;
        explicit Shim(CountingReranker& c) : c(c) {}
        double rerank(const std::string& q, const std::string& d) override { return c.rerank(q, d); }
    };
    counted.reranker_fast = std::make_shared<Shim>(fast);
    counted.reranker_fine = std::make_shared<Shim>(fine);
    auto r3 = retrieve("harbor beacon", index, counted, {.k = 3, .m = 6});
    std::size_t phase3_cosines = 0;
    for (const auto& t : r3.trace)
        if (t.phase == "phase3_entities")
            phase3_cosines = t.scored.size();
    CHECK(r3.scored_candidate_count == fast.calls + fine.calls + phase3_cosines);

    // Structural bound: |top| + (k * max children) * levels-below-top +
    // entities under k level-1 communities.
    std::size_t top = index.hierarchy.top_level().size();
    std::size_t max_children = 0;
    for (const auto& level : index.hierarchy.levels)
        for (const auto& [id, c] : level)
            if (c.level >= 2)
                max_children = std::max(max_children, c.members.size());
    std::vector<std::size_t> leaf_sizes;
    for (const auto& [id, c] : index.hierarchy.levels[0])
        leaf_sizes.push_back(c.members.size());
    std::sort(leaf_sizes.rbegin(), leaf_sizes.rend());
    std::size_t k_leaf_entities = 0;
    for (std::size_t i = 0; i < std::min<std::size_t>(3, leaf_sizes.size()); ++i)
        k_leaf_entities += leaf_sizes[i];
    CHECK(r3.scored_candidate_count <= top + 3 * max_children * 2 + k_leaf_entities);
}

TEST_CASE("local_search: scores every entity, ties by id") {
    auto index = two_level_fixture();
    MockEmbedder embedder(8);

    auto all = local_search("forest thread", index, embedder, 1000);
    CHECK(all.entities.size() == index.graph.entities.size());
    CHECK(all.scored_candidate_count == index.graph.entities.size());

    auto top3 = local_search("forest thread", index, embedder, 3);
    CHECK(top3.entities.size() == 3);
    CHECK(top3.scored_candidate_count == index.graph.entities.size());
    for (int i = 0; i < 3; ++i)
        CHECK(top3.entities[i] == all.entities[i]);
}

TEST_CASE("local_search: query matching an entity representation ranks it first") {
    auto index = two_level_fixture();
    MockEmbedder embedder(8);
    const auto& [id, entity] = *index.graph.entities.begin();
    // The entity was embedded from this exact text, so self-similarity is 1.
    std::string query = node_representation(entity, index.hierarchy);
    auto result = local_search(query, index, embedder, 1);
    REQUIRE(result.entities.size() == 1);
    CHECK(result.entities[0].score == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(vec::cosine(embedder.embed_one(query), entity.embedding) >=
          result.entities[0].score - 1e-12);
}

TEST_CASE("global_search: identity mock concatenates top summaries in id order") {
    auto index = two_level_fixture();
    IdentityGenerator gen(1 << 20);

    std::string expect;
    for (const auto& [id, c] : index.hierarchy.top_level()) {
        if (!expect.empty())
            expect += '\n';
        expect += c.summary;
    }
    CHECK(global_search("any question", index, gen) == expect);

    // Single community: that summary, truncated by the generator limit.
    auto solo = synthetic::make_balanced_index(1, 1, 2, 8, 2);
    IdentityGenerator tight(12);
    std::string summary = solo.hierarchy.top_level().begin()->second.summary;
    CHECK(global_search("q", solo, tight) == summary.substr(0, 12));
}

TEST_CASE("retrieve: integrator failure falls back to the context document") {
    auto index = two_level_fixture();
    auto providers = make_mock_providers(8);
    struct FailingGenerator final : Generator {
        std::string generate(const std::string&) override { throw ProviderError("backend down"); }
    };
    providers.generator = std::make_shared<FailingGenerator>();

    auto result = retrieve("copper", index, providers, {.k = 2, .m = 3});
    CHECK_FALSE(result.integrated);
    CHECK(result.answer.empty());
    CHECK(!result.context_document.empty());
}
