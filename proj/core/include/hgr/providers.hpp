#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hgr/types.hpp"

namespace hgr {

struct ProviderConfig {
    std::string endpoint;   // e.g. "http://localhost:8080"
    std::string model_name;
    std::chrono::milliseconds timeout{10000};
    int max_batch = 32;
    int retry_limit = 2;      // additional attempts after the first
    int max_inflight = 8;     // concurrent requests per adapter
    std::string bearer_token; // optional Authorization header

    void check() const; // throws ConfigError on non-positive limits
};

// All providers are read-only and safe for concurrent calls.

class Embedder {
public:
    virtual ~Embedder() = default;
    // One unit-norm vector of dimension() per input text. Inputs must be
    // non-empty.
    virtual std::vector<std::vector<float>> embed(const std::vector<std::string>& texts) = 0;
    virtual std::size_t dimension() const = 0;

    std::vector<float> embed_one(const std::string& text) { return embed({text}).front(); }
};

class Reranker {
public:
    virtual ~Reranker() = default;
    // Finite relevance score in [0, 1] for a (query, document) pair.
    virtual double rerank(const std::string& query, const std::string& document) = 0;
};

struct EntityDraft {
    std::string name;
    std::string description;
};

struct RelationDraft {
    std::string src_name;
    std::string dst_name;
    std::string description;
};

class Extractor {
public:
    virtual ~Extractor() = default;
    // Entity drafts carry non-empty names; relation drafts only reference
    // names present among the returned entity drafts.
    virtual std::pair<std::vector<EntityDraft>, std::vector<RelationDraft>> extract(const Chunk& chunk) = 0;
};

class Discriminator {
public:
    virtual ~Discriminator() = default;
    // Do the two entities denote the same real-world concept?
    virtual bool same_concept(const Entity& a, const Entity& b) = 0;
};

class Generator {
public:
    virtual ~Generator() = default;
    virtual std::string generate(const std::string& prompt) = 0;
};

// The full provider bundle a pipeline needs. Two reranker slots: a cheap
// one for the coarse top level and a finer one for mid-level expansion;
// they may share an implementation.
struct Providers {
    std::shared_ptr<Embedder> embedder;
    std::shared_ptr<Reranker> reranker_fast;
    std::shared_ptr<Reranker> reranker_fine;
    std::shared_ptr<Generator> generator;
    std::shared_ptr<Extractor> extractor;
    std::shared_ptr<Discriminator> discriminator;
};

} // namespace hgr
