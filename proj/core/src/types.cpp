#include "hgr/types.hpp"

#include <cmath>
#include <set>

#include "hgr/error.hpp"
#include "hgr/vec.hpp"

namespace hgr {

const std::map<std::string, Community>& Hierarchy::top_level() const {
    if (levels.empty())
        throw ValidationError("hierarchy has no levels");
    return levels.back();
}

const Community* Hierarchy::find(const std::string& id) const {
    for (const auto& level : levels) {
        auto it = level.find(id);
        if (it != level.end())
            return &it->second;
    }
    return nullptr;
}

const Community* Hierarchy::parent_of(const std::string& id) const {
    auto it = parent.find(id);
    if (it == parent.end())
        return nullptr;
    return find(it->second);
}

namespace {

void check_embedding(const std::string& id, const std::vector<float>& e, std::size_t dim) {
    if (e.empty())
        return;
    if (dim != 0 && e.size() != dim)
        throw ValidationError("entity " + id + ": embedding dimension " + std::to_string(e.size()) +
                              " != configured " + std::to_string(dim));
    double n = vec::norm(e);
    if (std::abs(n - 1.0) > 1e-6)
        throw ValidationError("entity " + id + ": embedding norm " + std::to_string(n) + " not unit");
}

} // namespace

void validate(const EntityGraph& graph) {
    for (const auto& [id, e] : graph.entities) {
        if (id != e.id)
            throw ValidationError("entity key " + id + " != id " + e.id);
        if (e.name.empty())
            throw ValidationError("entity " + id + ": empty name");
        check_embedding(id, e.embedding, graph.dimension);
        for (const auto& c : e.source_chunks)
            if (!graph.chunks.count(c))
                throw ValidationError("entity " + id + ": missing source chunk " + c);
    }
    std::set<std::string> relation_ids;
    for (const auto& r : graph.relations) {
        if (!relation_ids.insert(r.id).second)
            throw ValidationError("duplicate relation id " + r.id);
        if (!graph.entities.count(r.src))
            throw ValidationError("relation " + r.id + ": missing src entity " + r.src);
        if (!graph.entities.count(r.dst))
            throw ValidationError("relation " + r.id + ": missing dst entity " + r.dst);
        if (r.src == r.dst)
            throw ValidationError("relation " + r.id + ": self loop on " + r.src);
        if (!(r.weight > 0.0))
            throw ValidationError("relation " + r.id + ": non-positive weight");
    }
    for (const auto& [id, c] : graph.chunks) {
        if (id != c.id)
            throw ValidationError("chunk key " + id + " != id " + c.id);
        if (c.span.end < c.span.begin)
            throw ValidationError("chunk " + id + ": inverted span");
    }
}

void validate(const EntityGraph& graph, const Hierarchy& hierarchy) {
    validate(graph);
    if (hierarchy.levels.empty()) {
        if (!hierarchy.parent.empty())
            throw ValidationError("parent map non-empty but hierarchy has no levels");
        return;
    }

    std::set<std::string> covered_entities;
    for (std::size_t li = 0; li < hierarchy.levels.size(); ++li) {
        int level = static_cast<int>(li) + 1;
        for (const auto& [id, c] : hierarchy.levels[li]) {
            if (id != c.id)
                throw ValidationError("community key " + id + " != id " + c.id);
            if (c.level != level)
                throw ValidationError("community " + id + ": stored level " + std::to_string(c.level) +
                                      " != position " + std::to_string(level));
            if (c.members.empty())
                throw ValidationError("community " + id + ": no members");
            if (!c.representation.empty() && graph.dimension != 0 &&
                c.representation.size() != graph.dimension)
                throw ValidationError("community " + id + ": representation dimension mismatch");
            for (const auto& m : c.members) {
                if (level == 1) {
                    if (!graph.entities.count(m))
                        throw ValidationError("community " + id + ": member entity " + m + " missing");
                    if (!covered_entities.insert(m).second)
                        throw ValidationError("entity " + m + " claimed by more than one level-1 community");
                } else {
                    if (!hierarchy.levels[li - 1].count(m))
                        throw ValidationError("community " + id + ": member " + m +
                                              " not a level-" + std::to_string(level - 1) + " community");
                }
                auto it = hierarchy.parent.find(m);
                if (it == hierarchy.parent.end())
                    throw ValidationError("member " + m + " has no parent pointer");
                if (it->second != id)
                    throw ValidationError("member " + m + " parent pointer " + it->second +
                                          " != containing community " + id);
            }
        }
    }

    // Non-top communities must be claimed by exactly one parent; the member
    // loop above established pointer consistency, here we catch orphans.
    for (std::size_t li = 0; li + 1 < hierarchy.levels.size(); ++li) {
        for (const auto& [id, c] : hierarchy.levels[li]) {
            auto it = hierarchy.parent.find(id);
            if (it == hierarchy.parent.end())
                throw ValidationError("community " + id + " below the top level has no parent");
            if (!hierarchy.levels[li + 1].count(it->second))
                throw ValidationError("community " + id + ": dangling parent pointer " + it->second);
        }
    }
    for (const auto& [id, c] : hierarchy.top_level()) {
        if (hierarchy.parent.count(id))
            throw ValidationError("top-level community " + id + " must not have a parent");
    }

    if (covered_entities.size() != graph.entities.size())
        throw ValidationError("level-1 communities cover " + std::to_string(covered_entities.size()) +
                              " entities, graph has " + std::to_string(graph.entities.size()));

    for (const auto& [id, target] : hierarchy.parent) {
        if (!hierarchy.find(target))
            throw ValidationError("parent pointer of " + id + " targets unknown community " + target);
        bool known = graph.entities.count(id) || hierarchy.find(id) != nullptr;
        if (!known)
            throw ValidationError("parent map entry for unknown id " + id);
    }
}

} // namespace hgr
