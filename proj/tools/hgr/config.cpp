#include "hgr/config.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "hgr/error.hpp"
#include "hgr/http_providers.hpp"
#include "hgr/mock_providers.hpp"

namespace hgr::cli {

std::vector<EnvBinding> register_common_options(CLI::App& app, AppConfig& config) {
    app.set_config("--config", "", "Flat key=value config file");

    std::vector<EnvBinding> bindings;
    auto add = [&app, &bindings](const char* flag, auto& target, const char* env, const char* help) {
        bindings.push_back({flag, env, false});
        return app.add_option(flag, target, help)->envname(env);
    };

    add("--embed-endpoint", config.embed_endpoint, "HGR_EMBED_ENDPOINT", "Embedding service URL");
    add("--embed-model", config.embed_model, "HGR_EMBED_MODEL", "Embedding model name");
    add("--rerank-fast-endpoint", config.rerank_fast_endpoint, "HGR_RERANK_FAST_ENDPOINT",
        "Coarse reranker URL");
    add("--rerank-fast-model", config.rerank_fast_model, "HGR_RERANK_FAST_MODEL",
        "Coarse reranker model name");
    add("--rerank-fine-endpoint", config.rerank_fine_endpoint, "HGR_RERANK_FINE_ENDPOINT",
        "Fine reranker URL");
    add("--rerank-fine-model", config.rerank_fine_model, "HGR_RERANK_FINE_MODEL",
        "Fine reranker model name");
    add("--generate-endpoint", config.generate_endpoint, "HGR_GENERATE_ENDPOINT",
        "Generation service URL");
    add("--generate-model", config.generate_model, "HGR_GENERATE_MODEL", "Generation model name");
    add("--bearer-token", config.bearer_token, "HGR_BEARER_TOKEN", "Authorization bearer token");
    add("--provider-timeout-ms", config.timeout_ms, "HGR_PROVIDER_TIMEOUT_MS", "Request timeout");
    add("--provider-max-batch", config.max_batch, "HGR_PROVIDER_MAX_BATCH", "Embedding batch size");
    add("--provider-retries", config.retries, "HGR_PROVIDER_RETRIES", "Retries after a failure");
    add("--provider-max-inflight", config.max_inflight, "HGR_PROVIDER_MAX_INFLIGHT",
        "Concurrent requests per provider");
    add("--dimension", config.dimension, "HGR_DIMENSION", "Embedding dimension d");
    add("--generator-max-chars", config.generator_max_chars, "HGR_GENERATOR_MAX_CHARS",
        "Mock generator truncation length");
    add("--aliases", config.aliases_file, "HGR_ALIASES", "Alias table for the mock discriminator");
    add("--log-level", config.log_level, "HGR_LOG_LEVEL", "quiet, info or debug");
    app.add_flag("--mock-providers", config.mock_providers, "Use deterministic offline mocks");
    bindings.push_back({"--mock-providers", "HGR_MOCK_PROVIDERS", true});
    return bindings;
}

std::vector<std::string> inject_env_args(const std::vector<EnvBinding>& bindings,
                                         std::vector<std::string> args) {
    for (const auto& binding : bindings) {
        const char* value = std::getenv(binding.env.c_str());
        if (!value || !*value)
            continue;
        bool given = false;
        for (const auto& arg : args)
            if (arg == binding.flag || arg.rfind(binding.flag + "=", 0) == 0)
                given = true;
        if (given)
            continue;
        if (binding.boolean) {
            std::string v = value;
            if (v == "1" || v == "true" || v == "TRUE" || v == "yes" || v == "on")
                args.push_back(binding.flag);
        } else {
            args.push_back(binding.flag);
            args.emplace_back(value);
        }
    }
    return args;
}

namespace {

AliasTable load_aliases(const std::string& path) {
    AliasTable aliases;
    if (path.empty())
        return aliases;
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open alias file " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#')
            continue;
        auto sep = line.find('|');
        if (sep == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected name|name");
        aliases.emplace_back(line.substr(0, sep), line.substr(sep + 1));
    }
    return aliases;
}

ProviderConfig slot(const AppConfig& config, const std::string& endpoint, const std::string& model,
                    const char* name) {
    if (endpoint.empty())
        throw ConfigError(std::string(name) +
                          " endpoint not configured (set it or pass --mock-providers)");
    ProviderConfig c;
    c.endpoint = endpoint;
    c.model_name = model;
    c.timeout = std::chrono::milliseconds(config.timeout_ms);
    c.max_batch = config.max_batch;
    c.retry_limit = config.retries;
    c.max_inflight = config.max_inflight;
    c.bearer_token = config.bearer_token;
    return c;
}

} // namespace

Providers make_providers(const AppConfig& config) {
    if (config.mock_providers) {
        MockOptions options;
        options.dimension = config.dimension;
        options.generator_max_chars = config.generator_max_chars;
        options.aliases = load_aliases(config.aliases_file);
        return make_mock_providers(options);
    }

    Providers p;
    p.embedder = std::make_shared<HttpEmbedder>(
        slot(config, config.embed_endpoint, config.embed_model, "embed"), config.dimension);
    p.reranker_fast = std::make_shared<HttpReranker>(
        slot(config, config.rerank_fast_endpoint, config.rerank_fast_model, "rerank-fast"));
    p.reranker_fine = std::make_shared<HttpReranker>(
        slot(config, config.rerank_fine_endpoint, config.rerank_fine_model, "rerank-fine"));
    auto generator = std::make_shared<HttpGenerator>(
        slot(config, config.generate_endpoint, config.generate_model, "generate"));
    p.generator = generator;
    p.extractor = std::make_shared<HttpExtractor>(generator);
    p.discriminator = std::make_shared<HttpDiscriminator>(generator);
    return p;
}

bool log_enabled(const AppConfig& config, const char* level) {
    if (config.log_level == "quiet")
        return false;
    if (config.log_level == "debug")
        return true;
    return std::string(level) != "debug";
}

void log_info(const AppConfig& config, const std::string& message) {
    if (log_enabled(config, "info"))
        std::cerr << message << "\n";
}

} // namespace hgr::cli
