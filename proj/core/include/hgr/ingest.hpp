#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hgr/providers.hpp"
#include "hgr/types.hpp"

namespace hgr {

inline constexpr std::size_t kResolutionAllPairsLimit = 10000;
inline constexpr std::size_t kResolutionBlockSize = 50;

struct ResolutionParams {
    double tau = 0.95;             // strict cosine threshold: candidates need cos > tau
    bool use_discriminator = true; // when false, high cosine alone merges
    // Candidate generation switches from all-pairs to per-entity nearest
    // neighbours above all_pairs_limit entities.
    std::size_t all_pairs_limit = kResolutionAllPairsLimit;
    std::size_t block_size = kResolutionBlockSize;
};

// Sliding-window chunking over whitespace tokens: spans of at most
// chunk_tokens, consecutive spans overlapping by exactly overlap_tokens
// (stride = chunk_tokens - overlap_tokens); the final chunk may be
// shorter. Chunk ids are "<doc_id>:<ordinal>".
// Throws ValidationError on an empty document or overlap >= chunk size.
std::vector<Chunk> chunk_text(const std::string& doc, const std::string& doc_id,
                              std::size_t chunk_tokens = 600, std::size_t overlap_tokens = 100);

// Runs the extractor over every chunk and assembles the union of the
// extractions. Drafts whose normalized names match exactly are pre-merged
// (descriptions concatenated in draft order, source chunks unioned).
// Every entity is embedded from its description. Fail-fast: provider
// errors are rethrown tagged with the chunk id.
EntityGraph build_base_graph(const std::vector<Chunk>& chunks, Extractor& extractor,
                             Embedder& embedder);

// Hybrid resolution: candidate pairs with embedding dot product > tau are
// confirmed by the discriminator, then merged under transitive closure
// (union-find). A merged entity keeps the lexicographically smallest id,
// unions source chunks, concatenates descriptions in id order and is
// re-embedded from the merged description. Relations are re-pointed;
// self-loops produced by merging are dropped, parallel relations kept.
EntityGraph resolve_entities(EntityGraph graph, const ResolutionParams& params,
                             Discriminator& discriminator, Embedder& embedder);

} // namespace hgr
