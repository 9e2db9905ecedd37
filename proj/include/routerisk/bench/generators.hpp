#pragma once

// Seeded synthetic topologies and route enumeration for the benchmark.

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "routerisk/graph.hpp"

namespace routerisk::bench {

using Rng = std::mt19937_64;

/// Bare directed topology over ids 0..n-1.
struct Topology {
    std::size_t n = 0;
    std::vector<std::pair<NodeId, NodeId>> edges;

    bool has_edge(NodeId u, NodeId v) const;
};

struct AttributeRanges {
    double load_max = 0.6;         // load ~ U[0, load_max]
    double reliability_min = 0.7;  // reliability ~ U[reliability_min, 1]
    double fitness_min = 0.5;      // fitness ~ U[fitness_min, 1]

    bool operator==(const AttributeRanges&) const = default;
};

/// Tree grown breadth-first from node 0; every expanded node gets a uniform
/// number of children in [min_branch, max_branch]. Edges point parent -> child.
Topology random_tree(std::size_t n, std::size_t min_branch, std::size_t max_branch, Rng& rng);

/// Preferential attachment with one link per arriving node; edges point
/// from the existing node to the newcomer, so the result is a tree.
Topology barabasi_albert_tree(std::size_t n, Rng& rng);

/// Ring lattice with k neighbours per node (k even), each lattice edge
/// rewired with probability beta. Edges point i -> i + j.
Topology watts_strogatz(std::size_t n, std::size_t k, double beta, Rng& rng);

/// Each unordered pair linked with probability p, in a random direction.
Topology erdos_renyi(std::size_t n, double p, Rng& rng);

/// Adds the reverse of each edge with probability `fraction`.
void add_reciprocal_edges(Topology& t, double fraction, Rng& rng);

/// Adds `count` random directed edges between distinct, unlinked nodes.
void add_cross_edges(Topology& t, std::size_t count, Rng& rng);

/// Detaches round(fraction * |E|) subtrees and re-hangs each under a random
/// node outside it. Input must be a tree with edges parent -> child; the
/// output is again such a tree.
void rewire_subtrees(Topology& t, double fraction, Rng& rng);

GraphSnapshot with_attributes(const Topology& t, double timestamp, const AttributeRanges& ranges, Rng& rng);

struct RouteEnumerationOptions {
    std::size_t count = 9;
    std::size_t max_length = 6;
    std::size_t preferred_min_length = 3;
    std::size_t attempts = 400;

    bool operator==(const RouteEnumerationOptions&) const = default;
};

/// Distinct simple paths from seeded random walks along out-edges. Longer
/// walks are preferred. The result is ordered so that each even/odd pair
/// overlaps as little as possible.
std::vector<Route> enumerate_routes(const GraphSnapshot& g, const RouteEnumerationOptions& opts, Rng& rng);

}  // namespace routerisk::bench
