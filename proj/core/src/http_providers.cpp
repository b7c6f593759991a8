#include "hgr/http_providers.hpp"

#include <condition_variable>
#include <mutex>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "hgr/error.hpp"

namespace hgr {

using nlohmann::json;

void ProviderConfig::check() const {
    if (max_batch < 1)
        throw ConfigError("provider max_batch must be >= 1");
    if (timeout.count() <= 0)
        throw ConfigError("provider timeout must be > 0");
    if (retry_limit < 0)
        throw ConfigError("provider retry_limit must be >= 0");
    if (max_inflight < 1)
        throw ConfigError("provider max_inflight must be >= 1");
}

namespace {

// Caps concurrent requests per adapter.
class InflightLimiter {
public:
    explicit InflightLimiter(int limit) : available_(limit) {}

    struct Slot {
        InflightLimiter& limiter;
        ~Slot() {
            {
                std::lock_guard<std::mutex> lock(limiter.mutex_);
                ++limiter.available_;
            }
            limiter.cv_.notify_one();
        }
    };

    Slot acquire() {
        std::unique_lock<std::mutex> lock(mutex_);
        cv_.wait(lock, [this] { return available_ > 0; });
        --available_;
        return {*this};
    }

private:
    std::mutex mutex_;
    std::condition_variable cv_;
    int available_;
};

// Shared POST-with-retries plumbing behind the three adapters.
struct HttpClient {
    explicit HttpClient(ProviderConfig cfg)
        : config(std::move(cfg)), limiter(std::max(config.max_inflight, 1)) {
        config.check();
        if (config.endpoint.empty())
            throw ConfigError("provider endpoint not configured");
    }

    json post(const std::string& path, const json& body) const {
        auto slot = limiter.acquire();
        httplib::Client client(config.endpoint);
        auto secs = std::chrono::duration_cast<std::chrono::seconds>(config.timeout);
        time_t s = std::max<time_t>(secs.count(), 0);
        time_t us = std::chrono::duration_cast<std::chrono::microseconds>(
                        config.timeout - std::chrono::seconds(s))
                        .count();
        client.set_connection_timeout(s, us);
        client.set_read_timeout(s, us);
        client.set_write_timeout(s, us);
        httplib::Headers headers;
        if (!config.bearer_token.empty())
            headers.emplace("Authorization", "Bearer " + config.bearer_token);

        std::string payload = body.dump();
        std::string last_error;
        for (int attempt = 0; attempt <= config.retry_limit; ++attempt) {
            auto res = client.Post(path, headers, payload, "application/json");
            if (!res) {
                last_error = "transport error: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status < 200 || res->status >= 300) {
                last_error = "status " + std::to_string(res->status) + ": " + res->body;
                continue;
            }
            json parsed = json::parse(res->body, nullptr, false);
            if (parsed.is_discarded())
                throw ProviderError("malformed JSON from " + config.endpoint + path + ": " + res->body);
            return parsed;
        }
        throw ProviderError("POST " + config.endpoint + path + " failed after " +
                            std::to_string(config.retry_limit + 1) + " attempts; last: " + last_error);
    }

    json with_model(json body) const {
        if (!config.model_name.empty())
            body["model"] = config.model_name;
        return body;
    }

    ProviderConfig config;
    mutable InflightLimiter limiter;
};

} // namespace

// ---------------------------------------------------------------------------
// Embedder

struct HttpEmbedder::Impl {
    explicit Impl(ProviderConfig cfg) : client(std::move(cfg)) {}
    HttpClient client;
};

HttpEmbedder::HttpEmbedder(ProviderConfig config, std::size_t expected_dim)
    : impl_(std::make_unique<Impl>(std::move(config))), dim_(expected_dim) {
    if (dim_ == 0)
        throw ConfigError("embedding dimension must be >= 1");
}

HttpEmbedder::~HttpEmbedder() = default;

std::vector<std::vector<float>> HttpEmbedder::embed(const std::vector<std::string>& texts) {
    std::vector<std::vector<float>> out;
    out.reserve(texts.size());
    for (const auto& t : texts)
        if (t.empty())
            throw ProviderError("embed: empty text");

    std::size_t batch = static_cast<std::size_t>(impl_->client.config.max_batch);
    for (std::size_t start = 0; start < texts.size(); start += batch) {
        std::size_t end = std::min(texts.size(), start + batch);
        json body = impl_->client.with_model(
            {{"texts", std::vector<std::string>(texts.begin() + start, texts.begin() + end)}});
        json reply = impl_->client.post("/embed", body);
        if (!reply.contains("vectors") || !reply["vectors"].is_array())
            throw ProviderError("embed: missing \"vectors\" in reply: " + reply.dump());
        const auto& vectors = reply["vectors"];
        if (vectors.size() != end - start)
            throw ProviderError("embed: got " + std::to_string(vectors.size()) + " vectors for " +
                                std::to_string(end - start) + " texts");
        for (const auto& v : vectors) {
            std::vector<float> vec = v.get<std::vector<float>>();
            if (vec.size() != dim_)
                throw ProviderError("embed: dimension " + std::to_string(vec.size()) +
                                    " != configured " + std::to_string(dim_));
            out.push_back(std::move(vec));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Reranker

struct HttpReranker::Impl {
    explicit Impl(ProviderConfig cfg) : client(std::move(cfg)) {}
    HttpClient client;
};

HttpReranker::HttpReranker(ProviderConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

HttpReranker::~HttpReranker() = default;

double HttpReranker::rerank(const std::string& query, const std::string& document) {
    if (query.empty() || document.empty())
        throw ProviderError("rerank: empty text");
    json reply = impl_->client.post(
        "/rerank", impl_->client.with_model({{"query", query}, {"document", document}}));
    if (!reply.contains("score") || !reply["score"].is_number())
        throw ProviderError("rerank: missing numeric \"score\" in reply: " + reply.dump());
    double score = reply["score"].get<double>();
    if (score < 0.0)
        score = 0.0;
    if (score > 1.0)
        score = 1.0;
    return score;
}

// ---------------------------------------------------------------------------
// Generator

struct HttpGenerator::Impl {
    explicit Impl(ProviderConfig cfg) : client(std::move(cfg)) {}
    HttpClient client;
};

HttpGenerator::HttpGenerator(ProviderConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

HttpGenerator::~HttpGenerator() = default;

std::string HttpGenerator::generate(const std::string& prompt) {
    if (prompt.empty())
        throw ProviderError("generate: empty prompt");
    json reply = impl_->client.post("/generate", impl_->client.with_model({{"prompt", prompt}}));
    if (!reply.contains("text") || !reply["text"].is_string())
        throw ProviderError("generate: missing \"text\" in reply: " + reply.dump());
    return reply["text"].get<std::string>();
}

// ---------------------------------------------------------------------------
// Extraction / discrimination over /generate

std::pair<std::vector<EntityDraft>, std::vector<RelationDraft>> HttpExtractor::extract(const Chunk& chunk) {
    if (chunk.text.empty())
        throw ProviderError("extract: empty chunk text (chunk " + chunk.id + ")");
    std::string prompt =
        "Extract named entities and directed relations from the passage. Reply with JSON only: "
        "{\"entities\":[{\"name\":...,\"description\":...}],"
        "\"relations\":[{\"src\":...,\"dst\":...,\"description\":...}]}\n\nPassage:\n" +
        chunk.text;
    std::string raw = backend_->generate(prompt);
    json parsed = json::parse(raw, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object())
        throw ProviderError("extract: unparsable provider output: " + raw);

    std::vector<EntityDraft> entities;
    std::vector<RelationDraft> relations;
    try {
        for (const auto& e : parsed.value("entities", json::array()))
            entities.push_back({e.at("name").get<std::string>(), e.value("description", "")});
        for (const auto& r : parsed.value("relations", json::array()))
            relations.push_back({r.at("src").get<std::string>(), r.at("dst").get<std::string>(),
                                 r.value("description", "")});
    } catch (const json::exception& e) {
        throw ProviderError(std::string("extract: bad extraction record: ") + e.what() +
                            "; payload: " + raw);
    }
    for (const auto& e : entities)
        if (e.name.empty())
            throw ProviderError("extract: empty entity name in payload: " + raw);
    auto known = [&entities](const std::string& name) {
        for (const auto& e : entities)
            if (e.name == name)
                return true;
        return false;
    };
    for (const auto& r : relations)
        if (!known(r.src_name) || !known(r.dst_name))
            throw ProviderError("extract: relation references unknown entity in payload: " + raw);
    return {std::move(entities), std::move(relations)};
}

bool HttpDiscriminator::same_concept(const Entity& a, const Entity& b) {
    std::string prompt = "Do these two entries denote the same real-world concept? Reply yes or no.\n"
                         "A: " + a.name + " - " + a.description + "\n" +
                         "B: " + b.name + " - " + b.description;
    std::string raw = backend_->generate(prompt);
    std::string lowered;
    for (char c : raw) {
        if (lowered.size() >= 3)
            break;
        if (!std::isspace(static_cast<unsigned char>(c)))
            lowered += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (lowered.rfind("yes", 0) == 0)
        return true;
    if (lowered.rfind("no", 0) == 0)
        return false;
    throw ProviderError("discriminate: expected yes/no, got: " + raw);
}

} // namespace hgr
