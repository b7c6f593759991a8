#include "hgr/ingest.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>

#include "hgr/error.hpp"
#include "hgr/text.hpp"
#include "hgr/vec.hpp"

namespace hgr {

namespace {

std::string make_id(char prefix, std::size_t n, int width = 6) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%c%0*zu", prefix, width, n);
    return buf;
}

// Union-find with path compression; roots chosen by smallest index so the
// merge result is insertion-order independent.
class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b)
            return;
        if (b < a)
            std::swap(a, b);
        parent_[b] = a;
    }

private:
    std::vector<std::size_t> parent_;
};

} // namespace

std::vector<Chunk> chunk_text(const std::string& doc, const std::string& doc_id,
                              std::size_t chunk_tokens, std::size_t overlap_tokens) {
    if (chunk_tokens == 0 || overlap_tokens >= chunk_tokens)
        throw ValidationError("chunk_text: need 0 <= overlap < chunk size, got overlap=" +
                              std::to_string(overlap_tokens) + " size=" + std::to_string(chunk_tokens));
    auto tokens = text::tokenize(doc);
    if (tokens.empty())
        throw ValidationError("chunk_text: document " + doc_id + " has no tokens");

    std::size_t stride = chunk_tokens - overlap_tokens;
    std::vector<Chunk> out;
    std::size_t start = 0;
    std::size_t ordinal = 0;
    while (true) {
        std::size_t end = std::min(tokens.size(), start + chunk_tokens);
        Chunk c;
        c.doc_id = doc_id;
        c.id = doc_id + ":" + make_id('k', ordinal, 4).substr(1);
        c.span = {start, end};
        c.text = text::join_tokens(tokens, start, end);
        out.push_back(std::move(c));
        ++ordinal;
        if (end == tokens.size())
            break;
        start += stride;
    }
    return out;
}

EntityGraph build_base_graph(const std::vector<Chunk>& chunks, Extractor& extractor,
                             Embedder& embedder) {
    if (chunks.empty())
        throw ValidationError("build_base_graph: no chunks");

    EntityGraph graph;
    std::map<std::string, std::string> id_by_name; // normalized name -> entity id
    std::size_t next_entity = 1;
    std::size_t next_relation = 1;

    for (const auto& chunk : chunks) {
        if (graph.chunks.count(chunk.id))
            throw ValidationError("build_base_graph: duplicate chunk id " + chunk.id);
        graph.chunks.emplace(chunk.id, chunk);
    }

    for (const auto& chunk : chunks) {
        std::vector<EntityDraft> entity_drafts;
        std::vector<RelationDraft> relation_drafts;
        try {
            std::tie(entity_drafts, relation_drafts) = extractor.extract(chunk);
        } catch (const Error& e) {
            throw ProviderError("extraction failed on chunk " + chunk.id + ": " + e.what());
        }

        for (const auto& draft : entity_drafts) {
            if (draft.name.empty())
                throw ProviderError("extractor returned empty entity name on chunk " + chunk.id);
            std::string norm = text::normalize_name(draft.name);
            auto it = id_by_name.find(norm);
            if (it == id_by_name.end()) {
                Entity e;
                e.id = make_id('e', next_entity++);
                e.name = draft.name;
                e.description = draft.description;
                e.source_chunks.insert(chunk.id);
                id_by_name.emplace(norm, e.id);
                graph.entities.emplace(e.id, std::move(e));
            } else {
                Entity& e = graph.entities.at(it->second);
                e.source_chunks.insert(chunk.id);
                // Overlapping chunks re-extract the same sentences; skip exact
                // duplicate description text.
                if (!draft.description.empty() &&
                    e.description.find(draft.description) == std::string::npos) {
                    if (!e.description.empty())
                        e.description += ' ';
                    e.description += draft.description;
                }
            }
        }
        for (const auto& draft : relation_drafts) {
            auto src = id_by_name.find(text::normalize_name(draft.src_name));
            auto dst = id_by_name.find(text::normalize_name(draft.dst_name));
            if (src == id_by_name.end() || dst == id_by_name.end())
                throw ProviderError("relation draft references unknown entity on chunk " + chunk.id);
            if (src->second == dst->second)
                continue;
            Relation r;
            r.id = make_id('r', next_relation++);
            r.src = src->second;
            r.dst = dst->second;
            r.description = draft.description;
            r.weight = 1.0;
            graph.relations.push_back(std::move(r));
        }
    }

    // Embed every entity from its description (fall back to the name when a
    // draft came without one).
    std::vector<std::string> ids;
    std::vector<std::string> texts;
    for (const auto& [id, e] : graph.entities) {
        ids.push_back(id);
        texts.push_back(e.description.empty() ? e.name : e.description);
    }
    if (!ids.empty()) {
        auto vectors = embedder.embed(texts);
        for (std::size_t i = 0; i < ids.size(); ++i)
            graph.entities.at(ids[i]).embedding = std::move(vectors[i]);
        graph.dimension = embedder.dimension();
    }
    return graph;
}

namespace {

// Similarity for resolution: plain dot product. Entity embeddings are
// unit-norm by invariant, so this is the cosine without renormalization
// noise at the threshold boundary.
double unit_cosine(const std::vector<float>& a, const std::vector<float>& b) {
    return vec::dot(a, b);
}

std::vector<std::pair<std::size_t, std::size_t>> candidate_pairs(
    const std::vector<const Entity*>& entities, const ResolutionParams& params) {
    double tau = params.tau;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::size_t n = entities.size();
    if (n <= params.all_pairs_limit) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (unit_cosine(entities[i]->embedding, entities[j]->embedding) > tau)
                    pairs.emplace_back(i, j);
        return pairs;
    }
    // Blocked: keep each entity's top neighbours above the threshold.
    std::set<std::pair<std::size_t, std::size_t>> dedup;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::pair<double, std::size_t>> scored;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i)
                continue;
            double c = unit_cosine(entities[i]->embedding, entities[j]->embedding);
            if (c > tau)
                scored.emplace_back(c, j);
        }
        std::size_t keep = std::min(scored.size(), params.block_size);
        std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep),
                          scored.end(), std::greater<>());
        for (std::size_t k = 0; k < keep; ++k) {
            std::size_t j = scored[k].second;
            dedup.emplace(std::min(i, j), std::max(i, j));
        }
    }
    return {dedup.begin(), dedup.end()};
}

} // namespace

EntityGraph resolve_entities(EntityGraph graph, const ResolutionParams& params,
                             Discriminator& discriminator, Embedder& embedder) {
    if (!(params.tau > 0.0) || params.tau > 1.0)
        throw ValidationError("resolve_entities: tau must be in (0, 1]");

    std::vector<const Entity*> entities;
    entities.reserve(graph.entities.size());
    for (const auto& [id, e] : graph.entities) {
        if (!e.embedded())
            throw ValidationError("resolve_entities: entity " + id + " not embedded");
        entities.push_back(&e);
    }
    if (entities.size() < 2)
        return graph;

    UnionFind groups(entities.size());
    for (auto [i, j] : candidate_pairs(entities, params)) {
        bool same = !params.use_discriminator || discriminator.same_concept(*entities[i], *entities[j]);
        if (same)
            groups.unite(i, j);
    }

    // Collect merge groups; entities come out of the id-ordered map, so
    // group root = smallest id.
    std::map<std::size_t, std::vector<std::size_t>> members_by_root;
    for (std::size_t i = 0; i < entities.size(); ++i)
        members_by_root[groups.find(i)].push_back(i);

    EntityGraph out;
    out.chunks = graph.chunks;
    out.dimension = graph.dimension;

    std::map<std::string, std::string> remap; // old id -> surviving id
    std::vector<std::string> reembed_ids;
    std::vector<std::string> reembed_texts;
    for (const auto& [root, group] : members_by_root) {
        const Entity& keeper = *entities[root];
        Entity merged;
        merged.id = keeper.id;
        merged.name = keeper.name;
        for (std::size_t i : group) {
            const Entity& e = *entities[i];
            remap[e.id] = keeper.id;
            merged.source_chunks.insert(e.source_chunks.begin(), e.source_chunks.end());
            if (!merged.description.empty() && !e.description.empty())
                merged.description += ' ';
            merged.description += e.description;
        }
        if (group.size() == 1) {
            merged.embedding = keeper.embedding;
        } else {
            reembed_ids.push_back(merged.id);
            reembed_texts.push_back(merged.description.empty() ? merged.name : merged.description);
        }
        out.entities.emplace(merged.id, std::move(merged));
    }
    if (!reembed_ids.empty()) {
        auto vectors = embedder.embed(reembed_texts);
        for (std::size_t i = 0; i < reembed_ids.size(); ++i)
            out.entities.at(reembed_ids[i]).embedding = std::move(vectors[i]);
    }

    for (const auto& r : graph.relations) {
        Relation nr = r;
        nr.src = remap.at(r.src);
        nr.dst = remap.at(r.dst);
        if (nr.src == nr.dst)
            continue; // merging collapsed this edge
        out.relations.push_back(std::move(nr));
    }
    return out;
}

} // namespace hgr
