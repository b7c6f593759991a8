#include <doctest.h>

#include "hgr/error.hpp"
#include "hgr/louvain.hpp"
#include "hgr/rng.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace hgr;

namespace {

std::size_t community_count(const std::map<std::string, int>& partition) {
    std::set<int> labels;
    for (const auto& [node, lbl] : partition)
        labels.insert(lbl);
    return labels.size();
}

std::vector<WeightedEdge> triangle(const std::string& a, const std::string& b, const std::string& c) {
    return {{a, b, 1.0}, {b, c, 1.0}, {a, c, 1.0}};
}

} // namespace

TEST_CASE("two disjoint triangles split into exactly two communities") {
    std::vector<std::string> nodes = {"a", "b", "c", "d", "e", "f"};
    auto edges = triangle("a", "b", "c");
    auto more = triangle("d", "e", "f");
    edges.insert(edges.end(), more.begin(), more.end());

    auto partition = louvain_partition(nodes, edges);
    CHECK(community_count(partition) == 2);
    CHECK(partition.at("a") == partition.at("b"));
    CHECK(partition.at("a") == partition.at("c"));
    CHECK(partition.at("d") == partition.at("e"));
    CHECK(partition.at("d") == partition.at("f"));
    CHECK(partition.at("a") != partition.at("d"));

    // Brute force over all partitions of 6 nodes confirms this is optimal.
    std::vector<std::tuple<std::size_t, std::size_t, double>> indexed = {
        {0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}, {3, 4, 1.0}, {4, 5, 1.0}, {3, 5, 1.0}};
    double best = oracles::brute_force_best_modularity(6, indexed, 1.0);
    CHECK(modularity(nodes, edges, partition) == doctest::Approx(best).epsilon(1e-12));
    CHECK(best == doctest::Approx(0.5));
}

TEST_CASE("single node forms one community") {
    auto partition = louvain_partition({"only"}, {});
    REQUIRE(partition.size() == 1);
    CHECK(partition.at("only") == 0);
}

TEST_CASE("single edge joins both endpoints") {
    // Enumerating both partitions: together Q = 0, apart Q = -0.5.
    auto partition = louvain_partition({"a", "b"}, {{"a", "b", 1.0}});
    CHECK(partition.at("a") == partition.at("b"));
    CHECK(modularity({"a", "b"}, {{"a", "b", 1.0}}, partition) == doctest::Approx(0.0));
}

TEST_CASE("empty node set is an error") {
    CHECK_THROWS_AS(louvain_partition({}, {}), ValidationError);
}

TEST_CASE("non-positive weights and unknown endpoints are errors") {
    CHECK_THROWS_AS(louvain_partition({"a", "b"}, {{"a", "b", 0.0}}), ValidationError);
    CHECK_THROWS_AS(louvain_partition({"a", "b"}, {{"a", "z", 1.0}}), ValidationError);
}

TEST_CASE("determinism: same seed, same partition") {
    rng::Rng rng(9);
    auto g = synthetic::make_random_graph(rng, 24, 0.2, true);
    LouvainParams params;
    params.seed = 123;
    auto p1 = louvain_partition(g.nodes, g.edges, params);
    auto p2 = louvain_partition(g.nodes, g.edges, params);
    CHECK(p1 == p2);
}

TEST_CASE("partition beats singletons and approaches brute-force optimum on small graphs") {
    rng::Rng rng(2024);
    int tested = 0;
    while (tested < 60) {
        std::size_t n = 2 + rng.uniform_index(7); // 2..8
        double p = 0.25 + rng.uniform() * 0.6;
        bool random_weights = rng.uniform() < 0.5;
        auto g = synthetic::make_random_graph(rng, n, p, random_weights);
        if (g.edges.empty())
            continue;
        ++tested;

        LouvainParams params;
        params.seed = static_cast<std::uint64_t>(tested);
        auto partition = louvain_partition(g.nodes, g.edges, params);
        double q = modularity(g.nodes, g.edges, partition);

        // Never worse than all-singletons.
        std::map<std::string, int> singletons;
        int lbl = 0;
        for (const auto& node : g.nodes)
            singletons[node] = lbl++;
        CHECK(q >= modularity(g.nodes, g.edges, singletons));

        double best = oracles::brute_force_best_modularity(n, g.indexed_edges, 1.0);
        CHECK(q >= 0.95 * best - 1e-12);
    }
}

TEST_CASE("gamma sweeps change granularity monotonically on a weighted barbell") {
    // Two triangles with a weak bridge: low resolution merges everything,
    // high resolution splits.
    std::vector<std::string> nodes = {"a", "b", "c", "d", "e", "f"};
    auto edges = triangle("a", "b", "c");
    auto more = triangle("d", "e", "f");
    edges.insert(edges.end(), more.begin(), more.end());
    edges.push_back({"c", "d", 0.1});

    LouvainParams coarse;
    coarse.gamma = 0.05;
    LouvainParams fine;
    fine.gamma = 1.0;
    CHECK(community_count(louvain_partition(nodes, edges, coarse)) <=
          community_count(louvain_partition(nodes, edges, fine)));
}

TEST_CASE("modularity handles self-loops with the documented convention") {
    // Single node with a self-loop: one community, Q = in/2m - (tot/2m)^2
    // = 2w/2w - 1 = 0.
    std::map<std::string, int> partition{{"a", 0}};
    CHECK(modularity({"a"}, {{"a", "a", 2.0}}, partition) == doctest::Approx(0.0));

    // Two nodes, self-loop on one: the loop dominates the degree sum.
    std::map<std::string, int> split{{"a", 0}, {"b", 1}};
    double q = modularity({"a", "b"}, {{"a", "b", 1.0}, {"a", "a", 1.0}}, split);
    // 2m = 2*2 (a: 1+2, b: 1) -> in_a = 2, tot_a = 3, tot_b = 1.
    double expect = (2.0 / 4.0 - (3.0 / 4.0) * (3.0 / 4.0)) + (0.0 - (1.0 / 4.0) * (1.0 / 4.0));
    CHECK(q == doctest::Approx(expect).epsilon(1e-12));
}
