#include "routerisk/topology.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>
#include <unordered_set>

#include "routerisk/error.hpp"

namespace routerisk {

ShellProfile bfs_shells(const GraphSnapshot& g) {
    const std::size_t n = g.node_count();
    if (n == 0) throw Error(ErrorCode::EmptyGraph, "bfs_shells on empty snapshot");

    std::vector<int> depth(n, -1);
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < n; ++i) {
        if (g.in_edges(i).empty()) {
            depth[i] = 0;
            queue.push_back(i);
        }
    }
    if (queue.empty()) {
        depth[0] = 0;  // nodes are id-sorted, so index 0 is the smallest id
        queue.push_back(0);
    }

    int max_depth = 0;
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t e : g.out_edges(u)) {
            const std::size_t v = g.dst_index(e);
            if (depth[v] >= 0) continue;
            depth[v] = depth[u] + 1;
            max_depth = std::max(max_depth, depth[v]);
            queue.push_back(v);
        }
    }

    ShellProfile profile;
    profile.shell_sizes.assign(static_cast<std::size_t>(max_depth) + 1, 0);
    for (int d : depth) {
        if (d >= 0)
            ++profile.shell_sizes[static_cast<std::size_t>(d)];
        else
            ++profile.fallback_count;
    }
    if (profile.fallback_count > 0) profile.shell_sizes.push_back(profile.fallback_count);
    return profile;
}

double ols_slope(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2) return 0.0;
    const double mx = std::accumulate(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n), 0.0) / static_cast<double>(n);
    const double my = std::accumulate(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n), 0.0) / static_cast<double>(n);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

ShellGrowth shell_growth_slope(const ShellProfile& profile) {
    const std::size_t k = profile.shell_sizes.size();
    std::vector<double> depth(k);
    std::vector<double> log_size(k);
    for (std::size_t i = 0; i < k; ++i) {
        depth[i] = static_cast<double>(i);
        log_size[i] = std::log(static_cast<double>(profile.shell_sizes[i]) + 1.0);
    }
    ShellGrowth out;
    out.gamma_hat = ols_slope(depth, log_size);
    out.phi7 = std::tanh(std::max(0.0, out.gamma_hat));
    return out;
}

UndirectedProjection undirected_projection(const GraphSnapshot& g) {
    UndirectedProjection p;
    p.adjacency.assign(g.node_count(), {});
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        const std::size_t u = g.src_index(e);
        const std::size_t v = g.dst_index(e);
        p.adjacency[u].push_back(v);
        p.adjacency[v].push_back(u);
    }
    for (auto& nbrs : p.adjacency) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
        p.edge_count += nbrs.size();
    }
    p.edge_count /= 2;
    return p;
}

std::vector<std::size_t> component_labels(const UndirectedProjection& p, std::size_t* count) {
    const std::size_t n = p.adjacency.size();
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> label(n, unset);
    std::size_t next = 0;
    std::vector<std::size_t> stack;
    for (std::size_t s = 0; s < n; ++s) {
        if (label[s] != unset) continue;
        label[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v : p.adjacency[u]) {
                if (label[v] == unset) {
                    label[v] = next;
                    stack.push_back(v);
                }
            }
        }
        ++next;
    }
    if (count) *count = next;
    return label;
}

std::vector<std::size_t> largest_component(const UndirectedProjection& p) {
    std::size_t count = 0;
    const auto label = component_labels(p, &count);
    std::vector<std::size_t> sizes(count, 0);
    for (std::size_t l : label) ++sizes[l];
    std::size_t best = 0;
    for (std::size_t c = 1; c < count; ++c) {
        if (sizes[c] > sizes[best]) best = c;
    }
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < label.size(); ++i) {
        if (label[i] == best) members.push_back(i);
    }
    return members;
}

std::vector<int> hop_distances(const UndirectedProjection& p, std::size_t source) {
    std::vector<int> dist(p.adjacency.size(), -1);
    std::deque<std::size_t> queue{source};
    dist[source] = 0;
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t v : p.adjacency[u]) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

double cycle_rank_raw(const GraphSnapshot& g) {
    if (g.empty()) throw Error(ErrorCode::EmptyGraph, "cycle rank of empty snapshot");
    const auto p = undirected_projection(g);
    std::size_t components = 0;
    component_labels(p, &components);
    const double n = static_cast<double>(g.node_count());
    return (static_cast<double>(p.edge_count) - n + static_cast<double>(components)) / n;
}

double cycle_rank_norm(const GraphSnapshot& g) { return std::clamp(cycle_rank_raw(g), 0.0, 1.0); }

double triangle_density(const GraphSnapshot& g) {
    if (g.empty()) throw Error(ErrorCode::EmptyGraph, "triangle density of empty snapshot");
    const auto p = undirected_projection(g);
    double triplets = 0.0;
    std::size_t triangles = 0;
    for (std::size_t u = 0; u < p.adjacency.size(); ++u) {
        const auto& nu = p.adjacency[u];
        const double d = static_cast<double>(nu.size());
        triplets += d * (d - 1.0) / 2.0;
        // count each triangle once via u < v < w
        for (std::size_t v : nu) {
            if (v <= u) continue;
            const auto& nv = p.adjacency[v];
            auto a = std::upper_bound(nu.begin(), nu.end(), v);
            auto b = std::upper_bound(nv.begin(), nv.end(), v);
            while (a != nu.end() && b != nv.end()) {
                if (*a < *b) {
                    ++a;
                } else if (*b < *a) {
                    ++b;
                } else {
                    ++triangles;
                    ++a;
                    ++b;
                }
            }
        }
    }
    if (triplets == 0.0) return 0.0;
    return 3.0 * static_cast<double>(triangles) / triplets;
}

double reciprocal_ratio(const GraphSnapshot& g) {
    if (g.empty()) throw Error(ErrorCode::EmptyGraph, "reciprocal ratio of empty snapshot");
    if (g.edge_count() == 0) return 0.0;
    std::size_t paired = 0;
    for (const auto& e : g.edges()) {
        if (g.has_edge(e.dst, e.src)) ++paired;
    }
    return static_cast<double>(paired) / static_cast<double>(g.edge_count());
}

GraphSnapshot route_subgraph(const GraphSnapshot& g, const Route& r) {
    validate_route(g, r);
    std::vector<NodeAttributes> nodes;
    nodes.reserve(r.size());
    for (NodeId v : r.nodes()) nodes.push_back(g.node(v));
    std::vector<DirectedEdge> edges;
    for (NodeId v : r.nodes()) {
        for (std::size_t e : g.out_edges(g.index_of(v))) {
            const auto& edge = g.edges()[e];
            if (r.contains(edge.dst)) edges.push_back(edge);
        }
    }
    return GraphSnapshot(g.timestamp(), std::move(nodes), std::move(edges));
}

double four_point_delta(double dxy, double dzw, double dxz, double dyw, double dxw, double dyz) noexcept {
    std::array<double, 3> sums{dxy + dzw, dxz + dyw, dxw + dyz};
    std::sort(sums.begin(), sums.end());
    return (sums[2] - sums[1]) / 2.0;
}

GromovDelta gromov_delta(const GraphSnapshot& g, std::size_t samples, std::uint64_t seed) {
    GromovDelta out;
    if (g.node_count() < 4) {
        out.degenerate = true;
        return out;
    }
    const auto p = undirected_projection(g);
    const auto members = largest_component(p);
    out.disconnected = members.size() < g.node_count();
    const std::size_t m = members.size();
    if (m < 4) {
        out.degenerate = true;
        return out;
    }

    std::vector<std::vector<double>> dist(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        const auto hops = hop_distances(p, members[i]);
        for (std::size_t j = 0; j < m; ++j) dist[i][j] = static_cast<double>(hops[members[j]]);
    }
    auto quad = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
        return four_point_delta(dist[a][b], dist[c][d], dist[a][c], dist[b][d], dist[a][d], dist[b][c]);
    };

    const double md = static_cast<double>(m);
    const double subsets = md * (md - 1) * (md - 2) * (md - 3) / 24.0;
    if (subsets <= static_cast<double>(samples)) {
        out.exhaustive = true;
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = a + 1; b < m; ++b)
                for (std::size_t c = b + 1; c < m; ++c)
                    for (std::size_t d = c + 1; d < m; ++d) {
                        out.delta = std::max(out.delta, quad(a, b, c, d));
                        ++out.tuples;
                    }
        return out;
    }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    std::unordered_set<std::uint64_t> seen;
    while (out.tuples < samples) {
        std::array<std::size_t, 4> q{};
        for (std::size_t k = 0; k < 4; ++k) {
            std::size_t v;
            do {
                v = pick(rng);
            } while (std::find(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(k), v) !=
                     q.begin() + static_cast<std::ptrdiff_t>(k));
            q[k] = v;
        }
        std::sort(q.begin(), q.end());
        const std::uint64_t key = (static_cast<std::uint64_t>(q[0]) << 48) | (static_cast<std::uint64_t>(q[1]) << 32) |
                                  (static_cast<std::uint64_t>(q[2]) << 16) | static_cast<std::uint64_t>(q[3]);
        if (!seen.insert(key).second) continue;
        out.delta = std::max(out.delta, quad(q[0], q[1], q[2], q[3]));
        ++out.tuples;
    }
    return out;
}

}  // namespace routerisk
