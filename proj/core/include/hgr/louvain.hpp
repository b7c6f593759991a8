#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace hgr {

struct LouvainParams {
    double gamma = 1.0; // modularity resolution
    std::uint64_t seed = 0;
    int max_passes = 64; // sweep limit per restart
};

struct WeightedEdge {
    std::string u;
    std::string v;
    double w = 1.0;
};

// Modularity with resolution gamma on an undirected weighted graph.
// Convention: a distinct-pair edge (u, v, w) contributes A_uv = A_vu = w;
// a self-loop (u, u, w) contributes A_uu = 2w. Degrees k_i = sum_j A_ij,
// 2m = sum_i k_i.
//
//   Q = sum_c [ in_c / (2m) - gamma * (tot_c / (2m))^2 ]
//
// where in_c sums A_ij over ordered pairs inside c (diagonal included)
// and tot_c sums member degrees. Returns 0 for an edgeless graph.
double modularity(const std::vector<std::string>& nodes, const std::vector<WeightedEdge>& edges,
                  const std::map<std::string, int>& partition, double gamma = 1.0);

// One level of weighted Louvain: local moving from singletons, sweeping
// nodes until no single-node move improves modularity. Several seeded
// sweep orders are tried and the best-modularity result returned, so the
// output is deterministic given (seed, canonical node order). Moves with
// equal gain prefer the smaller target community label. Labels in the
// returned map are canonical: communities numbered 0.. by their smallest
// member in sorted-id order.
//
// Coarser levels are obtained by calling this again on the community
// graph (see build_hierarchy), which is what makes a multi-level
// hierarchy possible at all: a run that aggregated internally would leave
// nothing for the next level to merge.
std::map<std::string, int> louvain_partition(const std::vector<std::string>& nodes,
                                             const std::vector<WeightedEdge>& edges,
                                             const LouvainParams& params = {});

} // namespace hgr
