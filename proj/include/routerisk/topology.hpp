#pragma once

// Pure structural statistics over a GraphSnapshot.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "routerisk/graph.hpp"

namespace routerisk {

struct ShellProfile {
    std::vector<std::size_t> shell_sizes;  // |V_k| by BFS depth; fallback layer last
    std::size_t fallback_count = 0;        // nodes unreachable from every root

    bool operator==(const ShellProfile&) const = default;
};

/// Multi-source BFS from the in-degree-0 nodes (smallest id if there are none).
/// Unreachable nodes form one extra layer at depth max_k + 1.
/// Throws Error(EmptyGraph) on an empty snapshot.
ShellProfile bfs_shells(const GraphSnapshot& g);

/// Ordinary least-squares slope of y on x. Zero for fewer than two points or
/// constant x.
double ols_slope(std::span<const double> x, std::span<const double> y);

struct ShellGrowth {
    double gamma_hat = 0.0;  // slope of ln(|V_k| + 1) on k
    double phi7 = 0.0;       // tanh(max(0, gamma_hat))
};

ShellGrowth shell_growth_slope(const ShellProfile& profile);

/// Undirected simple projection: reciprocal pairs collapse into one edge.
/// Adjacency is by node index and sorted.
struct UndirectedProjection {
    std::vector<std::vector<std::size_t>> adjacency;
    std::size_t edge_count = 0;
};

UndirectedProjection undirected_projection(const GraphSnapshot& g);

/// Component label per node index; labels are dense and ordered by the
/// smallest member index.
std::vector<std::size_t> component_labels(const UndirectedProjection& p, std::size_t* count = nullptr);

/// Node indices of the largest component (ties: the one containing the smallest index), sorted.
std::vector<std::size_t> largest_component(const UndirectedProjection& p);

/// Unweighted hop distances from `source`; -1 for unreachable nodes.
std::vector<int> hop_distances(const UndirectedProjection& p, std::size_t source);

/// (|E_und| - |V| + C) / |V| without clamping.
double cycle_rank_raw(const GraphSnapshot& g);
/// cycle_rank_raw clamped to [0,1].
double cycle_rank_norm(const GraphSnapshot& g);

/// Global clustering coefficient of the undirected projection:
/// 3 * triangles / connected triplets, 0 without triplets.
double triangle_density(const GraphSnapshot& g);

/// Fraction of directed edges whose reverse edge also exists.
double reciprocal_ratio(const GraphSnapshot& g);

/// Induced subgraph on the route's nodes. Throws Error(InvalidRoute).
GraphSnapshot route_subgraph(const GraphSnapshot& g, const Route& r);

struct GromovDelta {
    double delta = 0.0;
    bool degenerate = false;    // fewer than 4 nodes in the component used
    bool disconnected = false;  // computed on the largest component only
    bool exhaustive = false;    // every 4-subset was examined
    std::size_t tuples = 0;     // 4-subsets examined
};

/// Four-point Gromov delta on the undirected projection's shortest-path
/// metric. Enumerates every 4-subset when C(n,4) <= samples, otherwise draws
/// `samples` distinct 4-subsets uniformly with a seeded generator.
GromovDelta gromov_delta(const GraphSnapshot& g, std::size_t samples = 200, std::uint64_t seed = 0);

/// Delta contribution of one quadruple given its six pairwise distances.
double four_point_delta(double dxy, double dzw, double dxz, double dyw, double dxw, double dyz) noexcept;

}  // namespace routerisk
