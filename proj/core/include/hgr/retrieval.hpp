#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hgr/providers.hpp"
#include "hgr/types.hpp"

namespace hgr {

struct BeamCandidate {
    std::string id;
    double score = 0.0;

    bool operator==(const BeamCandidate&) const = default;
};

// Ranked candidates carried between phases: at most k entries, sorted by
// score descending, ties broken by ascending id.
struct Beam {
    std::vector<BeamCandidate> candidates;
    int level = 0; // hierarchy level the beam was selected at

    bool empty() const { return candidates.empty(); }
};

struct PhaseTrace {
    std::string phase;
    int level = 0;
    std::vector<BeamCandidate> scored; // every candidate evaluated, ranked
};

struct RetrievalResult {
    std::vector<BeamCandidate> entities; // ranked, at most m
    std::string context_document;        // deterministic assembly, pre-integration
    std::string answer;                  // integrator output; empty if integration failed
    bool integrated = false;
    std::vector<PhaseTrace> trace;
    std::size_t scored_candidate_count = 0; // rerank + cosine evaluations
};

struct RetrievalParams {
    int k = 3;  // beam width
    int m = 10; // entities returned
    std::size_t context_budget_tokens = 4000;
};

// Sorts by (score desc, id asc) and truncates to k (k < 0: keep all).
void rank_candidates(std::vector<BeamCandidate>& candidates, int k = -1);

// Phase 1, coarse filtering: every top-level community scored with the
// fast reranker against its summary; top-k kept.
Beam phase1_top(const std::string& query, const Index& index, Reranker& reranker_fast, int k = 3,
                PhaseTrace* trace = nullptr);

// Phase 2, fine-grained re-ranking: children of all beam communities
// pooled and scored with the fine reranker against parent summary +
// child summary; global top-k across the pool (not per parent). A beam
// community without sub-communities passes through as its own candidate,
// scored on its summary alone.
Beam phase2_mid(const std::string& query, const Beam& beam, const Index& index,
                Reranker& reranker_fine, int k = 3, PhaseTrace* trace = nullptr);

// Context-aware entity vector [D(v); D(parent)], dimension exactly 2d.
std::vector<float> context_vector(const Entity& entity, const Index& index);

// Phase 3, entity-level search: candidates are all entities under the
// beam communities, scored by cosine between the duplicated query vector
// [q; q] and the context vector; top-m, ties by ascending id.
std::vector<BeamCandidate> phase3_entities(const std::string& query, const Beam& beam,
                                           const Index& index, Embedder& embedder, int m,
                                           PhaseTrace* trace = nullptr);

// Deterministic context document: per entity in rank order its name,
// description, descriptions of relations whose other endpoint is also
// retrieved (each relation once), and each distinct parent community
// summary once; truncated to the token budget.
std::string assemble_context(const std::vector<BeamCandidate>& entities, const Index& index,
                             std::size_t budget_tokens);

// Phase 4: assemble_context distilled by the integrator.
std::string phase4_integrate(const std::vector<BeamCandidate>& entities, const Index& index,
                             Generator& integrator, std::size_t budget_tokens);

// Full pipeline: phase1 -> phase2 per level until the beam reaches
// level 1 -> phase3 -> phase4. Integrator failure leaves the assembled
// context document in the result as a fallback instead of propagating.
RetrievalResult retrieve(const std::string& query, const Index& index, const Providers& providers,
                         const RetrievalParams& params = {});

// Dense-retrieval baseline: cosine of the query vector against every
// entity embedding (no context concatenation); scored_candidate_count is
// always the entity count.
RetrievalResult local_search(const std::string& query, const Index& index, Embedder& embedder,
                             int m, std::size_t context_budget_tokens = 4000);

// Prompt shapes for the map-reduce baseline. {question} and {context}
// are substituted; the defaults keep the payload bare so a pass-through
// generator reproduces the summaries verbatim.
struct GlobalSearchPrompts {
    std::string map_template = "{context}";
    std::string reduce_template = "{context}";
};

// Map-reduce baseline: one generation per top-level community (ascending
// community id), then one reduce generation over the concatenated map
// outputs (newline-joined).
std::string global_search(const std::string& query, const Index& index, Generator& generator,
                          const GlobalSearchPrompts& prompts = {});

} // namespace hgr
