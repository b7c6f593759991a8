#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace hgr {

// Half-open token span [begin, end) into a document's whitespace tokens.
struct TokenSpan {
    std::size_t begin = 0;
    std::size_t end = 0;

    bool operator==(const TokenSpan&) const = default;
};

struct Chunk {
    std::string id;
    std::string doc_id;
    std::string text; // tokens [begin, end), single-space joined
    TokenSpan span;

    bool operator==(const Chunk&) const = default;
};

struct Entity {
    std::string id;
    std::string name;
    std::string description;
    std::set<std::string> source_chunks;
    std::vector<float> embedding; // empty until embedded; unit norm otherwise

    bool embedded() const { return !embedding.empty(); }
    bool operator==(const Entity&) const = default;
};

struct Relation {
    std::string id;
    std::string src;
    std::string dst;
    std::string description; // natural-language edge description
    double weight = 1.0;

    bool operator==(const Relation&) const = default;
};

struct EntityGraph {
    std::map<std::string, Entity> entities;
    std::vector<Relation> relations;
    std::map<std::string, Chunk> chunks;
    std::size_t dimension = 0; // embedding dimension; 0 until anything is embedded

    bool operator==(const EntityGraph&) const = default;
};

struct Community {
    std::string id;
    int level = 1;                    // 1-based; entities sit at level 0
    std::vector<std::string> members; // sorted entity ids (level 1) or community ids (level > 1)
    std::string summary;
    std::vector<float> representation; // empty until aggregated; dimension d otherwise

    bool operator==(const Community&) const = default;
};

// Community forest, at most three levels. levels[0] holds level-1
// communities, levels.back() the top level. parent maps every entity id
// to its level-1 community and every non-top community to the community
// one level up.
struct Hierarchy {
    std::vector<std::map<std::string, Community>> levels;
    std::map<std::string, std::string> parent;

    int depth() const { return static_cast<int>(levels.size()); }
    bool empty() const { return levels.empty(); }

    const std::map<std::string, Community>& top_level() const;
    const Community* find(const std::string& id) const;
    const Community* parent_of(const std::string& id) const;

    bool operator==(const Hierarchy&) const = default;
};

// Everything retrieval operates on.
struct Index {
    EntityGraph graph;
    Hierarchy hierarchy;
};

// Throw ValidationError when an invariant is broken: dangling relation
// endpoints or source-chunk ids, non-positive weights, self-loop
// relations, embeddings with the wrong dimension or non-unit norm.
void validate(const EntityGraph& graph);

// Additionally checks the forest invariants: members exactly one level
// down, parent pointers consistent, every entity covered by exactly one
// level-1 community, every non-top community parented.
void validate(const EntityGraph& graph, const Hierarchy& hierarchy);

} // namespace hgr
