#include "hgr/mock_providers.hpp"

#include <algorithm>
#include <cmath>

#include "hgr/error.hpp"
#include "hgr/text.hpp"
#include "hgr/vec.hpp"

namespace hgr {

MockEmbedder::MockEmbedder(std::size_t dim) : dim_(dim) {
    if (dim_ == 0)
        throw ConfigError("embedding dimension must be >= 1");
}

std::vector<std::vector<float>> MockEmbedder::embed(const std::vector<std::string>& texts) {
    std::vector<std::vector<float>> out;
    out.reserve(texts.size());
    for (const auto& t : texts) {
        if (t.empty())
            throw ProviderError("embed: empty text");
        auto tokens = text::tokenize(t);
        std::vector<double> acc(dim_, 0.0);
        if (tokens.empty()) {
            // Whitespace-only input: hash the raw string as one token so the
            // result stays a unit vector.
            acc[text::fnv1a64(t) % dim_] += 1.0;
        } else {
            for (const auto& tok : tokens)
                acc[text::fnv1a64(tok) % dim_] += 1.0;
        }
        double norm = 0.0;
        for (double v : acc)
            norm += v * v;
        norm = std::sqrt(norm);
        std::vector<float> v(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            v[i] = static_cast<float>(acc[i] / norm);
        out.push_back(std::move(v));
    }
    return out;
}

double MockReranker::rerank(const std::string& query, const std::string& document) {
    if (query.empty() || document.empty())
        throw ProviderError("rerank: empty text");
    if (query == document)
        return 1.0;
    auto vs = embedder_.embed({query, document});
    return (1.0 + vec::cosine(vs[0], vs[1])) / 2.0;
}

std::pair<std::vector<EntityDraft>, std::vector<RelationDraft>> RuleExtractor::extract(const Chunk& chunk) {
    if (chunk.text.empty())
        throw ProviderError("extract: empty chunk text (chunk " + chunk.id + ")");

    std::vector<EntityDraft> entities;
    std::vector<RelationDraft> relations;
    std::vector<std::string> seen; // normalized names, in first-appearance order

    for (const auto& sentence : text::split_sentences(chunk.text)) {
        auto tokens = text::tokenize(sentence);
        std::vector<std::string> names_in_sentence;
        std::size_t i = 0;
        while (i < tokens.size()) {
            if (!text::is_capitalized(tokens[i])) {
                ++i;
                continue;
            }
            std::size_t j = i;
            std::string name;
            while (j < tokens.size() && text::is_capitalized(tokens[j])) {
                if (!name.empty())
                    name += ' ';
                name += text::strip_outer_punct(tokens[j]);
                // Trailing punctuation ends the run: "Paris, France" is two
                // entities, not one.
                char last = tokens[j].back();
                ++j;
                if (last == '.' || last == ',' || last == ';' || last == ':' || last == '!' ||
                    last == '?')
                    break;
            }
            i = j;
            if (name.empty())
                continue;
            std::string norm = text::normalize_name(name);
            if (std::find(seen.begin(), seen.end(), norm) == seen.end()) {
                seen.push_back(norm);
                entities.push_back({name, sentence});
            }
            if (std::find(names_in_sentence.begin(), names_in_sentence.end(), name) ==
                names_in_sentence.end())
                names_in_sentence.push_back(name);
        }
        for (std::size_t a = 0; a < names_in_sentence.size(); ++a)
            for (std::size_t b = a + 1; b < names_in_sentence.size(); ++b)
                relations.push_back({names_in_sentence[a], names_in_sentence[b], sentence});
    }
    return {std::move(entities), std::move(relations)};
}

AliasDiscriminator::AliasDiscriminator(AliasTable aliases) {
    aliases_.reserve(aliases.size());
    for (auto& [a, b] : aliases)
        aliases_.emplace_back(text::normalize_name(a), text::normalize_name(b));
}

bool AliasDiscriminator::same_concept(const Entity& a, const Entity& b) {
    std::string na = text::normalize_name(a.name);
    std::string nb = text::normalize_name(b.name);
    if (na == nb)
        return true;
    for (const auto& [x, y] : aliases_)
        if ((na == x && nb == y) || (na == y && nb == x))
            return true;
    return false;
}

std::string IdentityGenerator::generate(const std::string& prompt) {
    if (prompt.empty())
        throw ProviderError("generate: empty prompt");
    if (prompt.size() <= max_chars_)
        return prompt;
    return prompt.substr(0, max_chars_);
}

Providers make_mock_providers(const MockOptions& options) {
    Providers p;
    p.embedder = std::make_shared<MockEmbedder>(options.dimension);
    auto reranker = std::make_shared<MockReranker>(options.dimension);
    p.reranker_fast = reranker;
    p.reranker_fine = reranker;
    p.generator = std::make_shared<IdentityGenerator>(options.generator_max_chars);
    p.extractor = std::make_shared<RuleExtractor>();
    p.discriminator = std::make_shared<AliasDiscriminator>(options.aliases);
    return p;
}

} // namespace hgr
