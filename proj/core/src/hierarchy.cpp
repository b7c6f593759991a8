#include "hgr/hierarchy.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "hgr/error.hpp"

namespace hgr {

namespace {

std::string community_id(int level, std::size_t ordinal) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "c%d_%04zu", level, ordinal + 1);
    return buf;
}

// Groups a partition into member lists ordered by smallest member id, so
// community ordinals (and therefore ids) are canonical.
std::vector<std::vector<std::string>> grouped_members(const std::map<std::string, int>& partition) {
    std::map<int, std::vector<std::string>> by_label;
    for (const auto& [node, label] : partition)
        by_label[label].push_back(node); // map iteration: members arrive sorted
    std::vector<std::vector<std::string>> groups;
    groups.reserve(by_label.size());
    for (auto& [label, members] : by_label)
        groups.push_back(std::move(members));
    std::sort(groups.begin(), groups.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return groups;
}

} // namespace

Hierarchy build_hierarchy(const EntityGraph& graph, const LouvainParams& params, int target_levels) {
    if (graph.entities.empty())
        throw ValidationError("build_hierarchy: empty graph");
    if (target_levels < 1)
        throw ValidationError("build_hierarchy: target_levels must be >= 1");

    Hierarchy hierarchy;

    // Level 1: partition the entity graph.
    std::vector<std::string> nodes;
    nodes.reserve(graph.entities.size());
    for (const auto& [id, e] : graph.entities)
        nodes.push_back(id);
    std::vector<WeightedEdge> edges;
    edges.reserve(graph.relations.size());
    for (const auto& r : graph.relations)
        edges.push_back({r.src, r.dst, r.weight});

    // ancestor[entity] = its community at the level just built.
    std::map<std::string, std::string> ancestor;

    for (int level = 1; level <= target_levels; ++level) {
        LouvainParams level_params = params;
        level_params.seed = params.seed + static_cast<std::uint64_t>(level);
        auto partition = louvain_partition(nodes, edges, level_params);

        auto groups = grouped_members(partition);
        if (level > 1 && groups.size() == nodes.size())
            break; // failed to coarsen; this level adds nothing

        std::map<std::string, Community> communities;
        std::map<std::string, std::string> community_of; // node -> new community id
        for (std::size_t i = 0; i < groups.size(); ++i) {
            Community c;
            c.id = community_id(level, i);
            c.level = level;
            c.members = groups[i];
            for (const auto& m : c.members) {
                hierarchy.parent[m] = c.id;
                community_of[m] = c.id;
            }
            communities.emplace(c.id, std::move(c));
        }
        hierarchy.levels.push_back(std::move(communities));

        if (level == 1) {
            ancestor = community_of;
        } else {
            for (auto& [entity, comm] : ancestor)
                comm = community_of.at(comm);
        }

        if (hierarchy.levels.back().size() <= 1 || level == target_levels)
            break;

        // Community graph for the next level: inter-community relation
        // weights as edges, intra-community weight as self-loops.
        nodes.clear();
        for (const auto& [id, c] : hierarchy.levels.back())
            nodes.push_back(id);
        std::map<std::pair<std::string, std::string>, double> acc;
        for (const auto& r : graph.relations) {
            std::string cu = ancestor.at(r.src);
            std::string cv = ancestor.at(r.dst);
            if (cv < cu)
                std::swap(cu, cv);
            acc[{cu, cv}] += r.weight;
        }
        edges.clear();
        for (const auto& [pair, w] : acc)
            edges.push_back({pair.first, pair.second, w});
    }

    return hierarchy;
}

std::string summarize_community(const Community& community, const EntityGraph& graph,
                                const Hierarchy& hierarchy, Generator& generator) {
    if (community.members.empty())
        throw ValidationError("summarize_community: " + community.id + " has no members");

    std::vector<std::string> members = community.members;
    std::sort(members.begin(), members.end());

    std::string prompt;
    for (const auto& m : members) {
        if (!prompt.empty())
            prompt += '\n';
        if (community.level == 1) {
            auto it = graph.entities.find(m);
            if (it == graph.entities.end())
                throw ValidationError("summarize_community: member entity " + m + " missing");
            prompt += it->second.name;
            if (!it->second.description.empty()) {
                prompt += ": ";
                prompt += it->second.description;
            }
        } else {
            const Community* child = hierarchy.find(m);
            if (!child)
                throw ValidationError("summarize_community: member community " + m + " missing");
            prompt += child->summary;
        }
    }
    std::string summary = generator.generate(prompt);
    if (summary.empty())
        throw ProviderError("summarize_community: generator returned empty summary for " +
                            community.id);
    return summary;
}

std::vector<float> aggregate_representation(const std::vector<std::vector<float>>& child_vectors) {
    if (child_vectors.empty())
        throw ValidationError("aggregate_representation: no child vectors");
    std::size_t d = child_vectors.front().size();
    for (const auto& v : child_vectors)
        if (v.size() != d)
            throw ValidationError("aggregate_representation: dimension mismatch");
    std::vector<double> acc(d, 0.0);
    for (const auto& v : child_vectors)
        for (std::size_t i = 0; i < d; ++i)
            acc[i] += static_cast<double>(v[i]);
    std::vector<float> mean(d);
    double inv = 1.0 / static_cast<double>(child_vectors.size());
    for (std::size_t i = 0; i < d; ++i)
        mean[i] = static_cast<float>(acc[i] * inv);
    return mean;
}

std::string node_representation(const Entity& entity, const Hierarchy& hierarchy) {
    const Community* parent = hierarchy.parent_of(entity.id);
    if (!parent)
        throw ValidationError("node_representation: entity " + entity.id + " has no parent community");
    if (parent->summary.empty())
        throw ValidationError("node_representation: parent " + parent->id + " has no summary");
    return entity.description + kRepresentationSeparator + parent->summary;
}

void enrich_hierarchy(EntityGraph& graph, Hierarchy& hierarchy, Generator& generator,
                      Embedder& embedder) {
    // Pass 1: summaries bottom-up.
    for (auto& level : hierarchy.levels)
        for (auto& [id, c] : level)
            c.summary = summarize_community(c, graph, hierarchy, generator);

    // Pass 2a: entity vectors from node_representation text.
    std::vector<std::string> ids;
    std::vector<std::string> texts;
    for (const auto& [id, e] : graph.entities) {
        ids.push_back(id);
        texts.push_back(node_representation(e, hierarchy));
    }
    auto vectors = embedder.embed(texts);
    for (std::size_t i = 0; i < ids.size(); ++i)
        graph.entities.at(ids[i]).embedding = std::move(vectors[i]);
    graph.dimension = embedder.dimension();

    // Pass 2b: community vectors bottom-up (level-1 children are entities).
    for (auto& level : hierarchy.levels) {
        for (auto& [id, c] : level) {
            std::vector<std::vector<float>> children;
            children.reserve(c.members.size());
            for (const auto& m : c.members) {
                if (c.level == 1) {
                    children.push_back(graph.entities.at(m).embedding);
                } else {
                    const Community* child = hierarchy.find(m);
                    if (!child || child->representation.empty())
                        throw ValidationError("enrich_hierarchy: child " + m + " has no representation");
                    children.push_back(child->representation);
                }
            }
            c.representation = aggregate_representation(children);
        }
    }
}

Hierarchy build_enriched_hierarchy(EntityGraph& graph, const LouvainParams& params,
                                   int target_levels, Generator& generator, Embedder& embedder) {
    Hierarchy hierarchy = build_hierarchy(graph, params, target_levels);
    enrich_hierarchy(graph, hierarchy, generator, embedder);
    return hierarchy;
}

} // namespace hgr
