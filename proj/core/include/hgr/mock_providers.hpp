#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "hgr/providers.hpp"

namespace hgr {

// Deterministic, offline stand-ins for every provider slot. Each mock is
// a pure function of its inputs and construction-time config.

// Bag-of-buckets embedder: each whitespace token is hashed (FNV-1a 64) to
// a bucket in [0, d), counts accumulated, the count vector normalized to
// unit length. Identical texts embed identically; token overlap shows up
// as cosine similarity.
class MockEmbedder final : public Embedder {
public:
    explicit MockEmbedder(std::size_t dim = 256);

    std::vector<std::vector<float>> embed(const std::vector<std::string>& texts) override;
    std::size_t dimension() const override { return dim_; }

private:
    std::size_t dim_;
};

// Cosine of the mock embeddings, mapped to [0, 1] via (1 + cos) / 2.
class MockReranker final : public Reranker {
public:
    explicit MockReranker(std::size_t dim = 256) : embedder_(dim) {}

    double rerank(const std::string& query, const std::string& document) override;

private:
    MockEmbedder embedder_;
};

// Rule-based extraction: entities are maximal runs of capitalized tokens
// within a sentence; every ordered co-occurring pair in one sentence
// yields a directed relation whose description is that sentence. An
// entity's description is the first sentence it appears in.
class RuleExtractor final : public Extractor {
public:
    std::pair<std::vector<EntityDraft>, std::vector<RelationDraft>> extract(const Chunk& chunk) override;
};

using AliasTable = std::vector<std::pair<std::string, std::string>>;

// True iff normalized names are equal or the pair is registered in the
// alias table (symmetric).
class AliasDiscriminator final : public Discriminator {
public:
    AliasDiscriminator() = default;
    explicit AliasDiscriminator(AliasTable aliases);

    bool same_concept(const Entity& a, const Entity& b) override;

private:
    AliasTable aliases_; // normalized
};

// Returns the prompt truncated to max_chars bytes.
class IdentityGenerator final : public Generator {
public:
    explicit IdentityGenerator(std::size_t max_chars = 8192) : max_chars_(max_chars) {}

    std::string generate(const std::string& prompt) override;

private:
    std::size_t max_chars_;
};

struct MockOptions {
    std::size_t dimension = 256;
    std::size_t generator_max_chars = 8192;
    AliasTable aliases;
};

Providers make_mock_providers(const MockOptions& options = {});

inline Providers make_mock_providers(std::size_t dimension) {
    MockOptions options;
    options.dimension = dimension;
    return make_mock_providers(options);
}

} // namespace hgr
