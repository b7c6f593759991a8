#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <vector>

#include "hgr/config.hpp"
#include "hgr/error.hpp"

using hgr::cli::AppConfig;
namespace fs = std::filesystem;

namespace {

struct EnvGuard {
    std::vector<const char*> names;
    explicit EnvGuard(std::vector<const char*> vars) : names(std::move(vars)) {
        for (const char* n : names)
            unsetenv(n);
    }
    ~EnvGuard() {
        for (const char* n : names)
            unsetenv(n);
    }
};

AppConfig parse(std::vector<std::string> args) {
    CLI::App app{"test"};
    AppConfig config;
    auto bindings = hgr::cli::register_common_options(app, config);
    args = hgr::cli::inject_env_args(bindings, std::move(args));
    std::vector<const char*> argv = {"hgr"};
    for (const auto& a : args)
        argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
    return config;
}

fs::path write_config_file(const std::string& body) {
    auto path = fs::temp_directory_path() / "hgr_cli_config_test.ini";
    std::ofstream out(path, std::ios::trunc);
    out << body;
    return path;
}

} // namespace

TEST_CASE("config precedence: flag > env > file > default") {
    EnvGuard guard({"HGR_DIMENSION", "HGR_EMBED_ENDPOINT", "HGR_MOCK_PROVIDERS"});
    auto file = write_config_file("dimension=64\nembed-endpoint=http://file:1\n");

    SUBCASE("built-in default") {
        auto c = parse({});
        CHECK(c.dimension == 256);
        CHECK(c.embed_endpoint.empty());
    }
    SUBCASE("config file overrides default") {
        auto c = parse({"--config", file.string()});
        CHECK(c.dimension == 64);
        CHECK(c.embed_endpoint == "http://file:1");
    }
    SUBCASE("env overrides config file") {
        setenv("HGR_DIMENSION", "128", 1);
        setenv("HGR_EMBED_ENDPOINT", "http://env:2", 1);
        auto c = parse({"--config", file.string()});
        CHECK(c.dimension == 128);
        CHECK(c.embed_endpoint == "http://env:2");
    }
    SUBCASE("flag overrides env and config file") {
        setenv("HGR_DIMENSION", "128", 1);
        setenv("HGR_EMBED_ENDPOINT", "http://env:2", 1);
        auto c = parse({"--config", file.string(), "--dimension", "32", "--embed-endpoint",
                        "http://flag:3"});
        CHECK(c.dimension == 32);
        CHECK(c.embed_endpoint == "http://flag:3");
    }
    SUBCASE("flag overrides env without a config file") {
        setenv("HGR_DIMENSION", "128", 1);
        auto c = parse({"--dimension", "16"});
        CHECK(c.dimension == 16);
    }
    SUBCASE("boolean flag through the environment") {
        setenv("HGR_MOCK_PROVIDERS", "true", 1);
        auto c = parse({});
        CHECK(c.mock_providers);
    }
    fs::remove(file);
}

TEST_CASE("make_providers: mocks need no endpoints, http does") {
    EnvGuard guard({"HGR_DIMENSION"});
    AppConfig config;
    config.mock_providers = true;
    auto mocks = hgr::cli::make_providers(config);
    CHECK(mocks.embedder->dimension() == 256);
    CHECK(mocks.reranker_fast != nullptr);
    CHECK(mocks.extractor != nullptr);

    AppConfig http;
    http.mock_providers = false;
    CHECK_THROWS_AS(hgr::cli::make_providers(http), hgr::ConfigError);
}

TEST_CASE("make_providers: alias file drives the mock discriminator") {
    auto path = fs::temp_directory_path() / "hgr_alias_test.txt";
    {
        std::ofstream out(path, std::ios::trunc);
        out << "# comment line\nFirst Name|Second Name\n";
    }
    AppConfig config;
    config.mock_providers = true;
    config.aliases_file = path.string();
    auto providers = hgr::cli::make_providers(config);
    hgr::Entity a{"e1", "First Name", "", {}, {}};
    hgr::Entity b{"e2", "Second Name", "", {}, {}};
    hgr::Entity c{"e3", "Third Name", "", {}, {}};
    CHECK(providers.discriminator->same_concept(a, b));
    CHECK_FALSE(providers.discriminator->same_concept(a, c));
    fs::remove(path);

    AppConfig bad;
    bad.mock_providers = true;
    bad.aliases_file = (fs::temp_directory_path() / "missing_aliases.txt").string();
    CHECK_THROWS_AS(hgr::cli::make_providers(bad), hgr::ConfigError);
}
