#include "hgr/louvain.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include "hgr/error.hpp"
#include "hgr/rng.hpp"

namespace hgr {

namespace {

// Pairwise-exchange refinement is quadratic; skip it on big graphs.
constexpr std::size_t kSwapRefinementLimit = 96;

// Coarse restart starts only make sense where a near-optimal single-level
// partition is wanted; above this size they would flatten the hierarchy
// (see the portfolio comment in louvain_partition).
constexpr std::size_t kCoarseStartLimit = 32;

struct Graph {
    std::size_t n = 0;
    std::vector<std::vector<std::pair<std::size_t, double>>> adjacency; // distinct-pair edges
    std::vector<double> self_loop; // raw self-loop weight w (A_ii = 2w)
    std::vector<double> degree;    // k_i
    double m = 0.0;                // total edge weight (2m = sum of degrees)
};

Graph build_graph(const std::vector<std::string>& nodes, const std::vector<WeightedEdge>& edges,
                  const std::map<std::string, std::size_t>& index) {
    Graph g;
    g.n = nodes.size();
    g.adjacency.resize(g.n);
    g.self_loop.assign(g.n, 0.0);
    g.degree.assign(g.n, 0.0);

    // Accumulate parallel edges first for stable adjacency.
    std::map<std::pair<std::size_t, std::size_t>, double> acc;
    for (const auto& e : edges) {
        if (!(e.w > 0.0))
            throw ValidationError("louvain: non-positive edge weight between " + e.u + " and " + e.v);
        auto ui = index.find(e.u);
        auto vi = index.find(e.v);
        if (ui == index.end() || vi == index.end())
            throw ValidationError("louvain: edge endpoint not in node set: " + e.u + "-" + e.v);
        std::size_t a = ui->second, b = vi->second;
        acc[{std::min(a, b), std::max(a, b)}] += e.w;
    }
    for (const auto& [pair, w] : acc) {
        auto [a, b] = pair;
        if (a == b) {
            g.self_loop[a] += w;
            g.degree[a] += 2.0 * w;
        } else {
            g.adjacency[a].emplace_back(b, w);
            g.adjacency[b].emplace_back(a, w);
            g.degree[a] += w;
            g.degree[b] += w;
        }
        g.m += w;
    }
    return g;
}

// Local moving over one sweep order from a given initial assignment;
// returns the assignment (labels in [0, n) plus fresh labels in [n, 2n))
// after no sweep changes anything.
std::vector<std::size_t> local_moving(const Graph& g, const std::vector<std::size_t>& order,
                                      std::vector<std::size_t> community, double gamma,
                                      int max_passes) {
    std::size_t n = g.n;
    // Fresh singleton labels for nodes whose founding community was taken.
    auto fresh_label = [n](std::size_t node) { return n + node; };

    std::vector<double> tot(2 * n, 0.0); // indexed by label
    for (std::size_t i = 0; i < n; ++i)
        tot[community[i]] += g.degree[i];

    if (g.m <= 0.0)
        return community;

    double inv_m = 1.0 / g.m;
    double inv_2m2 = 1.0 / (2.0 * g.m * g.m);

    std::vector<double> weight_to(2 * n, 0.0);
    for (int pass = 0; pass < max_passes; ++pass) {
        bool changed = false;
        for (std::size_t node : order) {
            std::size_t old_label = community[node];
            double ki = g.degree[node];

            std::vector<std::size_t> touched;
            for (const auto& [nbr, w] : g.adjacency[node]) {
                std::size_t lbl = community[nbr];
                if (weight_to[lbl] == 0.0)
                    touched.push_back(lbl);
                weight_to[lbl] += w;
            }

            tot[old_label] -= ki;

            // Candidates: neighbouring communities, the old one, and a fresh
            // singleton (gain 0 relative to isolation).
            std::size_t best_label = old_label;
            double best_gain = weight_to[old_label] * inv_m - gamma * tot[old_label] * ki * inv_2m2;
            auto consider = [&](std::size_t lbl, double gain) {
                if (gain > best_gain || (gain == best_gain && lbl < best_label)) {
                    best_gain = gain;
                    best_label = lbl;
                }
            };
            for (std::size_t lbl : touched) {
                if (lbl == old_label)
                    continue;
                consider(lbl, weight_to[lbl] * inv_m - gamma * tot[lbl] * ki * inv_2m2);
            }
            std::size_t isolate = tot[old_label] == 0.0 ? old_label : fresh_label(node);
            consider(isolate, 0.0);

            tot[best_label] += ki;
            community[node] = best_label;
            if (best_label != old_label)
                changed = true;

            for (std::size_t lbl : touched)
                weight_to[lbl] = 0.0;
            weight_to[old_label] = 0.0;
        }
        if (!changed)
            break;
    }
    return community;
}


double modularity_of(const Graph& g, const std::vector<std::size_t>& community, double gamma) {
    if (g.m <= 0.0)
        return 0.0;
    std::map<std::size_t, double> in, tot;
    for (std::size_t i = 0; i < g.n; ++i) {
        tot[community[i]] += g.degree[i];
        in[community[i]] += 2.0 * g.self_loop[i];
        for (const auto& [nbr, w] : g.adjacency[i])
            if (community[nbr] == community[i])
                in[community[i]] += w; // counted from both endpoints
    }
    double two_m = 2.0 * g.m;
    double q = 0.0;
    for (const auto& [lbl, t] : tot) {
        double i = in.count(lbl) ? in.at(lbl) : 0.0;
        q += i / two_m - gamma * (t / two_m) * (t / two_m);
    }
    return q;
}

// Kernighan-Lin style refinement: exchange two nodes between their
// communities when that raises modularity. Single-node moves cannot reach
// these configurations; a swap keeps community sizes and count unchanged,
// so it never collapses granularity. Applies the best improving swap and
// reports whether one was found. The pair scan is quadratic, callers gate
// it to small graphs.
bool apply_best_swap(const Graph& g, std::vector<std::size_t>& community, double gamma) {
    if (g.m <= 0.0)
        return false;
    double inv_m = 1.0 / g.m;
    double inv_2m2 = 1.0 / (2.0 * g.m * g.m);

    std::vector<double> tot(2 * g.n, 0.0);
    for (std::size_t i = 0; i < g.n; ++i)
        tot[community[i]] += g.degree[i];

    // Weight from `node` to community `label`, skipping one member.
    auto weight_to = [&g, &community](std::size_t node, std::size_t label, std::size_t skip) {
        double w = 0.0;
        for (const auto& [nbr, wt] : g.adjacency[node])
            if (nbr != skip && community[nbr] == label)
                w += wt;
        return w;
    };

    double best_delta = 1e-12; // strictly improving only
    std::size_t best_u = 0, best_v = 0;
    for (std::size_t u = 0; u < g.n; ++u) {
        double ku = g.degree[u];
        for (std::size_t v = u + 1; v < g.n; ++v) {
            std::size_t a = community[u], b = community[v];
            if (a == b)
                continue;
            double kv = g.degree[v];
            double uv = 0.0;
            for (const auto& [nbr, wt] : g.adjacency[u])
                if (nbr == v)
                    uv += wt;

            // Sequential deltas: u moves a -> b (v still in b), then v moves
            // b -> a with u's relocation accounted for.
            double d1 = (weight_to(u, b, u) - weight_to(u, a, u)) * inv_m -
                        gamma * ku * (tot[b] - tot[a] + ku) * inv_2m2;
            double v_to_a = weight_to(v, a, u);            // u has left a
            double v_in_b = weight_to(v, b, v) + uv;       // u has joined b
            double d2 = (v_to_a - v_in_b) * inv_m -
                        gamma * kv * ((tot[a] - ku) - (tot[b] + ku) + kv) * inv_2m2;
            double delta = d1 + d2;
            if (delta > best_delta) {
                best_delta = delta;
                best_u = u;
                best_v = v;
            }
        }
    }
    if (best_u == best_v)
        return false;
    std::swap(community[best_u], community[best_v]);
    return true;
}

// Canonical relabel: communities numbered by smallest member index.
std::vector<int> canonicalize(const std::vector<std::size_t>& community) {
    std::map<std::size_t, int> label_map;
    std::vector<int> out(community.size());
    for (std::size_t i = 0; i < community.size(); ++i) {
        auto [it, inserted] = label_map.emplace(community[i], static_cast<int>(label_map.size()));
        out[i] = it->second;
    }
    return out;
}

} // namespace

double modularity(const std::vector<std::string>& nodes, const std::vector<WeightedEdge>& edges,
                  const std::map<std::string, int>& partition, double gamma) {
    std::vector<std::string> sorted_nodes = nodes;
    std::sort(sorted_nodes.begin(), sorted_nodes.end());
    sorted_nodes.erase(std::unique(sorted_nodes.begin(), sorted_nodes.end()), sorted_nodes.end());
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < sorted_nodes.size(); ++i)
        index.emplace(sorted_nodes[i], i);
    Graph g = build_graph(sorted_nodes, edges, index);
    std::vector<std::size_t> community(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        auto it = partition.find(sorted_nodes[i]);
        if (it == partition.end())
            throw ValidationError("modularity: node " + sorted_nodes[i] + " missing from partition");
        community[i] = static_cast<std::size_t>(it->second);
    }
    return modularity_of(g, community, gamma);
}

std::map<std::string, int> louvain_partition(const std::vector<std::string>& nodes,
                                             const std::vector<WeightedEdge>& edges,
                                             const LouvainParams& params) {
    if (nodes.empty())
        throw ValidationError("louvain: empty node set");
    if (!(params.gamma > 0.0))
        throw ValidationError("louvain: gamma must be > 0");

    std::vector<std::string> sorted_nodes = nodes;
    std::sort(sorted_nodes.begin(), sorted_nodes.end());
    sorted_nodes.erase(std::unique(sorted_nodes.begin(), sorted_nodes.end()), sorted_nodes.end());
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < sorted_nodes.size(); ++i)
        index.emplace(sorted_nodes[i], i);

    Graph g = build_graph(sorted_nodes, edges, index);

    // Restart portfolio. Singleton starts keep the result fine-grained
    // (they run first and win modularity ties). On small graphs the
    // portfolio also tries all-in-one, connected-component and random
    // coarse starts: node-by-node agglomeration strands in poor local
    // optima on near-structureless graphs, and a coarse start rescues
    // those. On larger graphs the coarse starts stay off on purpose: a
    // partition pushed all the way to the modularity optimum leaves no
    // pair of communities worth merging, which would make every level
    // above this one degenerate (the aggregated graph sees exactly the
    // same merge gains). Keeping the per-level search resolution-limited
    // is what gives the recursion its depth.
    bool full_portfolio = g.n <= kCoarseStartLimit;
    std::vector<std::size_t> singleton_init(g.n);
    std::iota(singleton_init.begin(), singleton_init.end(), 0);
    std::vector<std::size_t> merged_init(g.n, 0);
    std::vector<std::size_t> component_init(g.n, g.n);
    if (full_portfolio) {
        std::vector<std::vector<std::size_t>> adj(g.n);
        for (std::size_t i = 0; i < g.n; ++i)
            for (const auto& [j, w] : g.adjacency[i])
                adj[i].push_back(j);
        for (std::size_t root = 0; root < g.n; ++root) {
            if (component_init[root] != g.n)
                continue;
            std::vector<std::size_t> stack{root};
            component_init[root] = root;
            while (!stack.empty()) {
                std::size_t v = stack.back();
                stack.pop_back();
                for (std::size_t u : adj[v])
                    if (component_init[u] == g.n) {
                        component_init[u] = root;
                        stack.push_back(u);
                    }
            }
        }
    }

    constexpr int kOrders = 8;
    std::vector<std::size_t> canonical_order(g.n);
    std::iota(canonical_order.begin(), canonical_order.end(), 0);

    std::vector<std::size_t> best;
    double best_q = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < kOrders; ++r) {
        rng::Rng rng(params.seed * 1000003ULL + static_cast<std::uint64_t>(r));
        std::vector<std::size_t> order = canonical_order;
        if (r > 0)
            rng.shuffle(order);
        // Random coarse assignments escape the optima that node-by-node
        // agglomeration cannot reach (broad 2/3-way splits of dense graphs).
        std::vector<std::vector<std::size_t>> randoms;
        if (full_portfolio) {
            for (std::uint64_t k : {2, 2, 2, 3, 3}) {
                std::vector<std::size_t> init(g.n);
                for (std::size_t i = 0; i < g.n; ++i)
                    init[i] = rng.uniform_index(std::min<std::uint64_t>(k, g.n));
                randoms.push_back(std::move(init));
            }
        }
        std::vector<const std::vector<std::size_t>*> inits = {&singleton_init};
        if (full_portfolio) {
            inits.push_back(&merged_init);
            inits.push_back(&component_init);
            for (const auto& r2 : randoms)
                inits.push_back(&r2);
        }
        for (const auto* init : inits) {
            auto community = local_moving(g, order, *init, params.gamma, params.max_passes);
            if (g.n <= kSwapRefinementLimit) {
                for (std::size_t round = 0; round < 4 * g.n; ++round) {
                    if (!apply_best_swap(g, community, params.gamma))
                        break;
                    community = local_moving(g, order, std::move(community), params.gamma,
                                             params.max_passes);
                }
            }
            double q = modularity_of(g, community, params.gamma);
            if (q > best_q) {
                best_q = q;
                best = std::move(community);
            }
        }
    }

    auto labels = canonicalize(best);
    std::map<std::string, int> out;
    for (std::size_t i = 0; i < sorted_nodes.size(); ++i)
        out.emplace(sorted_nodes[i], labels[i]);
    return out;
}

} // namespace hgr
