#include <doctest.h>

#include <atomic>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "hgr/error.hpp"
#include "hgr/http_providers.hpp"
#include "hgr/mock_providers.hpp"
#include "hgr/vec.hpp"

using namespace hgr;
using nlohmann::json;

TEST_CASE("mock embedder: deterministic unit vectors") {
    MockEmbedder embedder(64);
    auto vs = embedder.embed({"a", "a", "b"});
    CHECK(vs[0] == vs[1]); // same text, same vector
    CHECK(vs[0] != vs[2]);
    for (const auto& v : vs) {
        REQUIRE(v.size() == 64);
        CHECK(vec::norm(v) == doctest::Approx(1.0).epsilon(1e-6));
    }
    // Distinct single tokens land in distinct buckets at d=64, so the
    // cosine drops strictly below 1.
    CHECK(vec::cosine(vs[0], vs[2]) < 1.0);
}

TEST_CASE("mock embedder: batching transparency") {
    MockEmbedder embedder(32);
    auto whole = embedder.embed({"one two", "three", "four five six"});
    auto part1 = embedder.embed({"one two"});
    auto part2 = embedder.embed({"three", "four five six"});
    CHECK(whole[0] == part1[0]);
    CHECK(whole[1] == part2[0]);
    CHECK(whole[2] == part2[1]);
}

TEST_CASE("mock embedder: token overlap raises cosine") {
    MockEmbedder embedder(64);
    auto vs = embedder.embed({"copper river valley", "copper river bridge", "unrelated zq xq"});
    CHECK(vec::cosine(vs[0], vs[1]) > vec::cosine(vs[0], vs[2]));
}

TEST_CASE("mock embedder: empty text rejected") {
    MockEmbedder embedder(16);
    CHECK_THROWS_AS(embedder.embed({""}), ProviderError);
}

TEST_CASE("mock reranker: identical texts score 1, everything lands in [0,1]") {
    MockReranker reranker(64);
    CHECK(reranker.rerank("x", "x") == 1.0);
    double unrelated = reranker.rerank("x", "completely unrelated zq");
    CHECK(unrelated >= 0.0);
    CHECK(unrelated <= 1.0);
    CHECK(reranker.rerank("x", "x") > unrelated);
}

TEST_CASE("rule extractor: capitalized runs and sentence co-occurrence") {
    RuleExtractor extractor;
    Chunk chunk{"c:0000", "c", "Paris is in France.", {0, 4}};
    auto [entities, relations] = extractor.extract(chunk);
    REQUIRE(entities.size() == 2);
    CHECK(entities[0].name == "Paris");
    CHECK(entities[1].name == "France");
    REQUIRE(relations.size() == 1);
    CHECK(relations[0].src_name == "Paris");
    CHECK(relations[0].dst_name == "France");
    CHECK(relations[0].description == "Paris is in France.");
}

TEST_CASE("rule extractor: multi-token runs stay one entity") {
    RuleExtractor extractor;
    Chunk chunk{"c:0000", "c", "The United States borders Canada.", {0, 5}};
    auto [entities, relations] = extractor.extract(chunk);
    // "The United States" is one capitalized run under the rule.
    REQUIRE(entities.size() == 2);
    CHECK(entities[0].name == "The United States");
    CHECK(entities[1].name == "Canada");
    REQUIRE(relations.size() == 1);
}

TEST_CASE("rule extractor: no capitalized runs, no output") {
    RuleExtractor extractor;
    Chunk chunk{"c:0000", "c", "nothing here is capitalized.", {0, 4}};
    auto [entities, relations] = extractor.extract(chunk);
    CHECK(entities.empty());
    CHECK(relations.empty());
}

TEST_CASE("rule extractor: empty chunk is a precondition error") {
    RuleExtractor extractor;
    Chunk chunk{"c:0000", "c", "", {0, 0}};
    CHECK_THROWS_AS(extractor.extract(chunk), ProviderError);
}

TEST_CASE("alias discriminator") {
    AliasDiscriminator plain;
    AliasDiscriminator with_alias(AliasTable{{"U.S.", "United States"}});
    Entity us{"e1", "U.S.", "", {}, {}};
    Entity united{"e2", "United States", "", {}, {}};
    Entity paris{"e3", "Paris", "", {}, {}};
    Entity tokyo{"e4", "Tokyo", "", {}, {}};
    Entity paris2{"e5", "paris", "", {}, {}};

    CHECK(with_alias.same_concept(us, united));
    CHECK(with_alias.same_concept(united, us)); // symmetric
    CHECK_FALSE(plain.same_concept(us, united));
    CHECK(plain.same_concept(paris, paris2)); // normalized-equal names
    CHECK_FALSE(plain.same_concept(paris, tokyo));
}

TEST_CASE("identity generator truncates") {
    IdentityGenerator gen(10);
    CHECK(gen.generate("abcdefghijkl") == "abcdefghij");
    CHECK(gen.generate("short") == "short");
    CHECK(gen.generate("short") == gen.generate("short"));
}

// ---------------------------------------------------------------------------
// HTTP adapters against an in-process server

namespace {

struct TestServer {
    httplib::Server server;
    std::thread thread;
    int port = 0;
    std::atomic<int> embed_calls{0};
    std::atomic<int> fail_next{0};

    TestServer() {
        server.Post("/embed", [this](const httplib::Request& req, httplib::Response& res) {
            ++embed_calls;
            if (fail_next.fetch_sub(1) > 0) {
                res.status = 500;
                return;
            }
            auto body = json::parse(req.body);
            json vectors = json::array();
            for (const auto& t : body.at("texts")) {
                (void)t;
                vectors.push_back({1.0, 0.0, 0.0});
            }
            res.set_content(json{{"vectors", vectors}}.dump(), "application/json");
        });
        server.Post("/rerank", [](const httplib::Request& req, httplib::Response& res) {
            auto body = json::parse(req.body);
            REQUIRE(body.contains("query"));
            REQUIRE(body.contains("document"));
            res.set_content(json{{"score", 1.7}}.dump(), "application/json"); // out of range on purpose
        });
        server.Post("/generate", [](const httplib::Request& req, httplib::Response& res) {
            auto body = json::parse(req.body);
            res.set_content(json{{"text", "echo:" + body.at("prompt").get<std::string>()}}.dump(),
                            "application/json");
        });
        port = server.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }

    ~TestServer() {
        server.stop();
        thread.join();
    }

    ProviderConfig config() const {
        ProviderConfig c;
        c.endpoint = "http://127.0.0.1:" + std::to_string(port);
        c.timeout = std::chrono::milliseconds(2000);
        c.max_batch = 2;
        c.retry_limit = 2;
        return c;
    }
};

} // namespace

TEST_CASE("http embedder: batching, dimension check, retries") {
    TestServer ts;
    HttpEmbedder embedder(ts.config(), 3);
    auto vs = embedder.embed({"a", "b", "c"}); // max_batch 2 -> two requests
    CHECK(vs.size() == 3);
    CHECK(ts.embed_calls.load() == 2);
    CHECK(vs[0] == std::vector<float>{1.0f, 0.0f, 0.0f});

    // One 500 then success: the retry absorbs it.
    ts.fail_next = 1;
    CHECK_NOTHROW(embedder.embed({"x"}));

    // Persistent failure exhausts retries.
    ts.fail_next = 100;
    CHECK_THROWS_AS(embedder.embed({"x"}), ProviderError);
    ts.fail_next = 0;

    // Wrong configured dimension.
    HttpEmbedder wrong(ts.config(), 5);
    CHECK_THROWS_AS(wrong.embed({"x"}), ProviderError);
}

TEST_CASE("http reranker clamps backend scores to [0,1]") {
    TestServer ts;
    HttpReranker reranker(ts.config());
    CHECK(reranker.rerank("q", "d") == 1.0);
}

TEST_CASE("http generator round-trips text") {
    TestServer ts;
    HttpGenerator gen(ts.config());
    CHECK(gen.generate("hello") == "echo:hello");
}

TEST_CASE("http transport failure surfaces as ProviderError") {
    ProviderConfig c;
    c.endpoint = "http://127.0.0.1:9"; // discard port; nothing listens
    c.timeout = std::chrono::milliseconds(200);
    c.retry_limit = 1;
    HttpGenerator gen(c);
    CHECK_THROWS_AS(gen.generate("x"), ProviderError);
}

TEST_CASE("http extractor parses strict JSON and rejects garbage") {
    struct CannedGenerator : Generator {
        std::string reply;
        std::string generate(const std::string&) override { return reply; }
    };
    auto backend = std::make_shared<CannedGenerator>();
    HttpExtractor extractor(backend);
    Chunk chunk{"c:0000", "c", "some text", {0, 2}};

    backend->reply = R"({"entities":[{"name":"A","description":"d"},{"name":"B","description":""}],
                         "relations":[{"src":"A","dst":"B","description":"A to B"}]})";
    auto [entities, relations] = extractor.extract(chunk);
    CHECK(entities.size() == 2);
    REQUIRE(relations.size() == 1);
    CHECK(relations[0].src_name == "A");

    backend->reply = "not json at all";
    CHECK_THROWS_AS(extractor.extract(chunk), ProviderError);

    backend->reply = R"({"entities":[{"name":"A"}],"relations":[{"src":"A","dst":"Z","description":""}]})";
    CHECK_THROWS_AS(extractor.extract(chunk), ProviderError); // dangling relation
}

TEST_CASE("http discriminator parses yes/no") {
    struct CannedGenerator : Generator {
        std::string reply;
        std::string generate(const std::string&) override { return reply; }
    };
    auto backend = std::make_shared<CannedGenerator>();
    HttpDiscriminator d(backend);
    Entity a{"e1", "A", "", {}, {}};
    Entity b{"e2", "B", "", {}, {}};

    backend->reply = "Yes, same concept.";
    CHECK(d.same_concept(a, b));
    backend->reply = " no";
    CHECK_FALSE(d.same_concept(a, b));
    backend->reply = "maybe";
    CHECK_THROWS_AS(d.same_concept(a, b), ProviderError);
}
