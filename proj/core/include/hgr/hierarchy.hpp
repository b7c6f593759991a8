#pragma once

#include <string>
#include <vector>

#include "hgr/louvain.hpp"
#include "hgr/providers.hpp"
#include "hgr/types.hpp"

namespace hgr {

inline constexpr const char* kRepresentationSeparator = " | ";

// Recursive community detection: level 1 partitions the entity graph,
// level l+1 partitions the level-l community graph, whose edge weight
// between two communities is the summed weight of relations crossing
// them (intra-community weight becomes a self-loop so degrees stay
// honest). Recursion stops at target_levels, when a level has a single
// community, or when a partition fails to coarsen. Summaries and
// representation vectors are left empty; see enrich_hierarchy.
Hierarchy build_hierarchy(const EntityGraph& graph, const LouvainParams& params,
                          int target_levels = 3);

// Prompt is the deterministic id-ordered concatenation of member names
// and descriptions (level 1) or member summaries (level > 1); the
// generator's reply is the summary.
std::string summarize_community(const Community& community, const EntityGraph& graph,
                                const Hierarchy& hierarchy, Generator& generator);

// Componentwise arithmetic mean of the child vectors. Deliberately not
// re-normalized: downstream scoring is cosine-based, which is
// scale-invariant.
std::vector<float> aggregate_representation(const std::vector<std::vector<float>>& child_vectors);

// Text whose embedding is the entity's retrieval-time vector: the local
// description concatenated with the parent community's summary.
// Throws ValidationError for an orphan entity or a parent without a
// summary.
std::string node_representation(const Entity& entity, const Hierarchy& hierarchy);

// Two-pass enrichment (summaries cannot depend on node representations
// or vice versa, so the only acyclic schedule is):
//   1. summaries bottom-up from raw member descriptions;
//   2. entity embeddings re-embedded from node_representation text, then
//      community vectors aggregated bottom-up (level-1 children are the
//      entity vectors).
void enrich_hierarchy(EntityGraph& graph, Hierarchy& hierarchy, Generator& generator,
                      Embedder& embedder);

// Convenience: build_hierarchy + enrich_hierarchy.
Hierarchy build_enriched_hierarchy(EntityGraph& graph, const LouvainParams& params,
                                   int target_levels, Generator& generator, Embedder& embedder);

} // namespace hgr
