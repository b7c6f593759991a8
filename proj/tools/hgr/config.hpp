#pragma once

#include <cstddef>
#include <string>

#include <CLI11.hpp>

#include "hgr/providers.hpp"

namespace hgr::cli {

// Everything configurable across subcommands. Precedence per option:
// command-line flag > HGR_* environment variable > config file
// (--config, flat key=value lines) > built-in default.
struct AppConfig {
    // provider slots
    std::string embed_endpoint;
    std::string embed_model;
    std::string rerank_fast_endpoint;
    std::string rerank_fast_model;
    std::string rerank_fine_endpoint;
    std::string rerank_fine_model;
    std::string generate_endpoint;
    std::string generate_model;
    std::string bearer_token;
    long timeout_ms = 10000;
    int max_batch = 32;
    int retries = 2;
    int max_inflight = 8;

    // embedding space
    std::size_t dimension = 256;

    // retrieval
    int beam = 3;
    int top_m = 10;
    std::size_t budget = 4000;

    // weighting scheduler
    std::size_t window = 16;
    double temperature = 1.0;
    std::string advantage_mode = "standardized"; // or "offset"

    // mocks
    bool mock_providers = false;
    std::size_t generator_max_chars = 8192;
    std::string aliases_file; // lines "name|name" for the mock discriminator

    std::string log_level = "info"; // quiet | info | debug
};

struct EnvBinding {
    std::string flag; // "--dimension"
    std::string env;  // "HGR_DIMENSION"
    bool boolean = false;
};

// Registers the shared options on an app (or subcommand) so every
// subcommand honors the same keys, env vars and config file. Returns the
// flag/env-var bindings for inject_env_args.
std::vector<EnvBinding> register_common_options(CLI::App& app, AppConfig& config);

// CLI11 ranks a config file above environment variables; the contract
// here is flag > env > file > default. Environment values are therefore
// spliced into the argument list as synthetic flags, but only when the
// flag is not already present, which reproduces the wanted order exactly.
std::vector<std::string> inject_env_args(const std::vector<EnvBinding>& bindings,
                                         std::vector<std::string> args);

// Builds the provider bundle: mocks when mock_providers is set, HTTP
// adapters otherwise (endpoints required). Throws ConfigError on missing
// endpoints or a malformed alias file.
Providers make_providers(const AppConfig& config);

bool log_enabled(const AppConfig& config, const char* level);
void log_info(const AppConfig& config, const std::string& message);

} // namespace hgr::cli
