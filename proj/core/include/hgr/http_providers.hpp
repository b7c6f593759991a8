#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "hgr/providers.hpp"

namespace hgr {

// HTTP adapters speaking the minimal JSON contract:
//
//   POST /embed    {"texts": [...]}                 -> {"vectors": [[...], ...]}
//   POST /rerank   {"query": ..., "document": ...}  -> {"score": ...}
//   POST /generate {"prompt": ...}                  -> {"text": ...}
//
// A non-empty model_name is sent as an additional "model" field. Requests
// are retried up to retry_limit extra times on transport failure or
// non-2xx status; providers are read-only so retries are safe.

class HttpEmbedder final : public Embedder {
public:
    HttpEmbedder(ProviderConfig config, std::size_t expected_dim);
    ~HttpEmbedder() override;

    std::vector<std::vector<float>> embed(const std::vector<std::string>& texts) override;
    std::size_t dimension() const override { return dim_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::size_t dim_;
};

class HttpReranker final : public Reranker {
public:
    explicit HttpReranker(ProviderConfig config);
    ~HttpReranker() override;

    // Backend scores are clamped to [0, 1] at this boundary.
    double rerank(const std::string& query, const std::string& document) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

class HttpGenerator final : public Generator {
public:
    explicit HttpGenerator(ProviderConfig config);
    ~HttpGenerator() override;

    std::string generate(const std::string& prompt) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Extraction and discrimination ride on /generate: the adapter prompts
// for a strict JSON reply and parses it. Unparsable output raises
// ProviderError carrying the raw payload.
class HttpExtractor final : public Extractor {
public:
    explicit HttpExtractor(std::shared_ptr<Generator> backend) : backend_(std::move(backend)) {}

    std::pair<std::vector<EntityDraft>, std::vector<RelationDraft>> extract(const Chunk& chunk) override;

private:
    std::shared_ptr<Generator> backend_;
};

class HttpDiscriminator final : public Discriminator {
public:
    explicit HttpDiscriminator(std::shared_ptr<Generator> backend) : backend_(std::move(backend)) {}

    bool same_concept(const Entity& a, const Entity& b) override;

private:
    std::shared_ptr<Generator> backend_;
};

} // namespace hgr
