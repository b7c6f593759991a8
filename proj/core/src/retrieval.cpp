#include "hgr/retrieval.hpp"

#include <algorithm>
#include <set>

#include "hgr/error.hpp"
#include "hgr/text.hpp"
#include "hgr/vec.hpp"

namespace hgr {

namespace {

std::string substitute(std::string tmpl, const std::string& question, const std::string& context) {
    auto replace_all = [](std::string& s, const std::string& from, const std::string& to) {
        std::size_t pos = 0;
        while ((pos = s.find(from, pos)) != std::string::npos) {
            s.replace(pos, from.size(), to);
            pos += to.size();
        }
    };
    replace_all(tmpl, "{question}", question);
    replace_all(tmpl, "{context}", context);
    return tmpl;
}

void record(PhaseTrace* trace, std::string phase, int level, std::vector<BeamCandidate> scored) {
    if (!trace)
        return;
    trace->phase = std::move(phase);
    trace->level = level;
    rank_candidates(scored);
    trace->scored = std::move(scored);
}

// All entities at or below a community.
void collect_entities(const Community& c, const Index& index, std::set<std::string>& out) {
    if (c.level == 1) {
        out.insert(c.members.begin(), c.members.end());
        return;
    }
    for (const auto& m : c.members) {
        const Community* child = index.hierarchy.find(m);
        if (!child)
            throw ValidationError("hierarchy member " + m + " not found");
        collect_entities(*child, index, out);
    }
}

} // namespace

void rank_candidates(std::vector<BeamCandidate>& candidates, int k) {
    std::sort(candidates.begin(), candidates.end(), [](const BeamCandidate& a, const BeamCandidate& b) {
        if (a.score != b.score)
            return a.score > b.score;
        return a.id < b.id;
    });
    if (k >= 0 && candidates.size() > static_cast<std::size_t>(k))
        candidates.resize(static_cast<std::size_t>(k));
}

Beam phase1_top(const std::string& query, const Index& index, Reranker& reranker_fast, int k,
                PhaseTrace* trace) {
    if (index.hierarchy.empty() || index.hierarchy.top_level().empty())
        throw ValidationError("phase1_top: hierarchy has no top-level communities");
    if (k < 1)
        throw ValidationError("phase1_top: k must be >= 1");

    std::vector<BeamCandidate> scored;
    for (const auto& [id, c] : index.hierarchy.top_level())
        scored.push_back({id, reranker_fast.rerank(query, c.summary)});
    record(trace, "phase1_top", index.hierarchy.depth(), scored);

    Beam beam;
    beam.level = index.hierarchy.depth();
    beam.candidates = std::move(scored);
    rank_candidates(beam.candidates, k);
    return beam;
}

Beam phase2_mid(const std::string& query, const Beam& beam, const Index& index,
                Reranker& reranker_fine, int k, PhaseTrace* trace) {
    if (beam.empty())
        throw ValidationError("phase2_mid: empty beam");
    if (k < 1)
        throw ValidationError("phase2_mid: k must be >= 1");

    std::vector<BeamCandidate> pooled;
    int out_level = beam.level;
    for (const auto& candidate : beam.candidates) {
        const Community* parent = index.hierarchy.find(candidate.id);
        if (!parent)
            throw ValidationError("phase2_mid: beam community " + candidate.id + " not found");
        if (parent->level >= 2) {
            out_level = std::min(out_level, parent->level - 1);
            for (const auto& child_id : parent->members) {
                const Community* child = index.hierarchy.find(child_id);
                if (!child)
                    throw ValidationError("phase2_mid: child community " + child_id + " not found");
                pooled.push_back(
                    {child_id, reranker_fine.rerank(query, parent->summary + "\n" + child->summary)});
            }
        } else {
            // No sub-communities: the community stands for itself so shallow
            // branches stay reachable.
            out_level = std::min(out_level, parent->level);
            pooled.push_back({candidate.id, reranker_fine.rerank(query, parent->summary)});
        }
    }
    record(trace, "phase2_mid", out_level, pooled);

    Beam out;
    out.level = out_level;
    out.candidates = std::move(pooled);
    rank_candidates(out.candidates, k);
    return out;
}

std::vector<float> context_vector(const Entity& entity, const Index& index) {
    if (!entity.embedded())
        throw ValidationError("context_vector: entity " + entity.id + " not embedded");
    const Community* parent = index.hierarchy.parent_of(entity.id);
    if (!parent)
        throw ValidationError("context_vector: entity " + entity.id + " has no parent community");
    if (parent->representation.empty())
        throw ValidationError("context_vector: parent " + parent->id + " has no representation");
    return vec::concat(entity.embedding, parent->representation);
}

std::vector<BeamCandidate> phase3_entities(const std::string& query, const Beam& beam,
                                           const Index& index, Embedder& embedder, int m,
                                           PhaseTrace* trace) {
    if (beam.empty())
        throw ValidationError("phase3_entities: empty beam");
    if (m < 1)
        throw ValidationError("phase3_entities: m must be >= 1");

    std::set<std::string> candidate_ids;
    for (const auto& candidate : beam.candidates) {
        const Community* c = index.hierarchy.find(candidate.id);
        if (!c)
            throw ValidationError("phase3_entities: beam community " + candidate.id + " not found");
        collect_entities(*c, index, candidate_ids);
    }
    if (candidate_ids.empty())
        throw ValidationError("phase3_entities: no candidate entities under the beam");

    std::vector<float> q_vec = embedder.embed_one(query);
    std::vector<float> qq = vec::concat(q_vec, q_vec);

    std::vector<BeamCandidate> scored;
    scored.reserve(candidate_ids.size());
    for (const auto& id : candidate_ids) {
        auto it = index.graph.entities.find(id);
        if (it == index.graph.entities.end())
            throw ValidationError("phase3_entities: member entity " + id + " missing from graph");
        scored.push_back({id, vec::cosine(qq, context_vector(it->second, index))});
    }
    record(trace, "phase3_entities", 0, scored);

    rank_candidates(scored, m);
    return scored;
}

std::string assemble_context(const std::vector<BeamCandidate>& entities, const Index& index,
                             std::size_t budget_tokens) {
    if (entities.empty())
        throw ValidationError("assemble_context: no entities");

    std::set<std::string> retrieved;
    for (const auto& e : entities)
        retrieved.insert(e.id);

    std::string doc;
    auto add_line = [&doc](const std::string& line) {
        if (line.empty())
            return;
        if (!doc.empty())
            doc += '\n';
        doc += line;
    };

    std::set<std::string> seen_relations;
    std::set<std::string> seen_parents;
    for (const auto& candidate : entities) {
        const Entity& entity = index.graph.entities.at(candidate.id);
        add_line(entity.name);
        add_line(entity.description);
        for (const auto& r : index.graph.relations) {
            if (r.src != entity.id && r.dst != entity.id)
                continue;
            const std::string& other = r.src == entity.id ? r.dst : r.src;
            if (!retrieved.count(other))
                continue;
            if (!seen_relations.insert(r.id).second)
                continue;
            add_line(r.description);
        }
        if (const Community* parent = index.hierarchy.parent_of(entity.id)) {
            if (seen_parents.insert(parent->id).second)
                add_line(parent->summary);
        }
    }
    return text::truncate_tokens(doc, budget_tokens);
}

std::string phase4_integrate(const std::vector<BeamCandidate>& entities, const Index& index,
                             Generator& integrator, std::size_t budget_tokens) {
    return integrator.generate(assemble_context(entities, index, budget_tokens));
}

RetrievalResult retrieve(const std::string& query, const Index& index, const Providers& providers,
                         const RetrievalParams& params) {
    RetrievalResult result;

    PhaseTrace t1;
    Beam beam = phase1_top(query, index, *providers.reranker_fast, params.k, &t1);
    result.trace.push_back(std::move(t1));

    auto expandable = [&index](const Beam& b) {
        for (const auto& c : b.candidates) {
            const Community* community = index.hierarchy.find(c.id);
            if (community && community->level >= 2)
                return true;
        }
        return false;
    };
    while (expandable(beam)) {
        PhaseTrace t2;
        beam = phase2_mid(query, beam, index, *providers.reranker_fine, params.k, &t2);
        result.trace.push_back(std::move(t2));
    }

    PhaseTrace t3;
    result.entities = phase3_entities(query, beam, index, *providers.embedder, params.m, &t3);
    result.trace.push_back(std::move(t3));

    result.context_document = assemble_context(result.entities, index, params.context_budget_tokens);
    try {
        result.answer = providers.generator->generate(result.context_document);
        result.integrated = true;
    } catch (const ProviderError&) {
        // Callers fall back to the raw context document.
        result.integrated = false;
        result.answer.clear();
    }

    for (const auto& t : result.trace)
        result.scored_candidate_count += t.scored.size();
    return result;
}

RetrievalResult local_search(const std::string& query, const Index& index, Embedder& embedder,
                             int m, std::size_t context_budget_tokens) {
    if (index.graph.entities.empty())
        throw ValidationError("local_search: empty graph");
    if (m < 1)
        throw ValidationError("local_search: m must be >= 1");

    std::vector<float> q_vec = embedder.embed_one(query);
    std::vector<BeamCandidate> scored;
    scored.reserve(index.graph.entities.size());
    for (const auto& [id, e] : index.graph.entities) {
        if (!e.embedded())
            throw ValidationError("local_search: entity " + id + " not embedded");
        scored.push_back({id, vec::cosine(q_vec, e.embedding)});
    }

    RetrievalResult result;
    PhaseTrace trace;
    record(&trace, "local_search", 0, scored);
    result.trace.push_back(std::move(trace));
    result.scored_candidate_count = scored.size();

    rank_candidates(scored, m);
    result.entities = std::move(scored);

    // Plain entity descriptions; downstream integration is the caller's call.
    std::string doc;
    for (const auto& c : result.entities) {
        const Entity& e = index.graph.entities.at(c.id);
        if (!doc.empty())
            doc += '\n';
        doc += e.name + ": " + e.description;
    }
    result.context_document = text::truncate_tokens(doc, context_budget_tokens);
    return result;
}

std::string global_search(const std::string& query, const Index& index, Generator& generator,
                          const GlobalSearchPrompts& prompts) {
    if (index.hierarchy.empty() || index.hierarchy.top_level().empty())
        throw ValidationError("global_search: hierarchy has no top-level communities");

    std::string combined;
    for (const auto& [id, c] : index.hierarchy.top_level()) {
        if (c.summary.empty())
            throw ValidationError("global_search: community " + id + " has no summary");
        std::string mapped = generator.generate(substitute(prompts.map_template, query, c.summary));
        if (!combined.empty())
            combined += '\n';
        combined += mapped;
    }
    return generator.generate(substitute(prompts.reduce_template, query, combined));
}

} // namespace hgr
