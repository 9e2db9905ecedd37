#include "routerisk/bench/generators.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "routerisk/error.hpp"

namespace routerisk::bench {

namespace {

std::size_t uniform_index(std::size_t n, Rng& rng) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

double uniform(double lo, double hi, Rng& rng) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

bool linked(const Topology& t, NodeId u, NodeId v) { return t.has_edge(u, v) || t.has_edge(v, u); }

}  // namespace

bool Topology::has_edge(NodeId u, NodeId v) const {
    return std::find(edges.begin(), edges.end(), std::pair{u, v}) != edges.end();
}

Topology random_tree(std::size_t n, std::size_t min_branch, std::size_t max_branch, Rng& rng) {
    if (n == 0 || min_branch == 0 || min_branch > max_branch)
        throw Error(ErrorCode::InvalidConfig, "random_tree needs n >= 1 and 1 <= min_branch <= max_branch");
    Topology t{n, {}};
    std::deque<NodeId> queue{0};
    NodeId next = 1;
    while (next < n && !queue.empty()) {
        const NodeId u = queue.front();
        queue.pop_front();
        const auto k = std::uniform_int_distribution<std::size_t>(min_branch, max_branch)(rng);
        for (std::size_t j = 0; j < k && next < n; ++j) {
            t.edges.emplace_back(u, next);
            queue.push_back(next++);
        }
    }
    return t;
}

Topology barabasi_albert_tree(std::size_t n, Rng& rng) {
    Topology t{n, {}};
    if (n < 2) return t;
    std::vector<std::size_t> degree(n, 0);
    t.edges.emplace_back(0, 1);
    degree[0] = degree[1] = 1;
    for (NodeId v = 2; v < n; ++v) {
        std::discrete_distribution<std::size_t> pick(degree.begin(), degree.begin() + v);
        const auto u = static_cast<NodeId>(pick(rng));
        t.edges.emplace_back(u, v);
        ++degree[u];
        ++degree[v];
    }
    return t;
}

Topology watts_strogatz(std::size_t n, std::size_t k, double beta, Rng& rng) {
    if (k % 2 != 0 || k >= n) throw Error(ErrorCode::InvalidConfig, "watts_strogatz needs even k < n");
    Topology t{n, {}};
    for (NodeId i = 0; i < n; ++i) {
        for (std::size_t j = 1; j <= k / 2; ++j) t.edges.emplace_back(i, static_cast<NodeId>((i + j) % n));
    }
    for (auto& e : t.edges) {
        if (uniform(0.0, 1.0, rng) >= beta) continue;
        std::vector<NodeId> options;
        for (NodeId w = 0; w < n; ++w) {
            if (w != e.first && w != e.second && !linked(t, e.first, w)) options.push_back(w);
        }
        if (!options.empty()) e.second = options[uniform_index(options.size(), rng)];
    }
    return t;
}

Topology erdos_renyi(std::size_t n, double p, Rng& rng) {
    Topology t{n, {}};
    std::bernoulli_distribution coin(0.5);
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = i + 1; j < n; ++j) {
            if (uniform(0.0, 1.0, rng) >= p) continue;
            if (coin(rng))
                t.edges.emplace_back(i, j);
            else
                t.edges.emplace_back(j, i);
        }
    }
    return t;
}

void add_reciprocal_edges(Topology& t, double fraction, Rng& rng) {
    const std::size_t original = t.edges.size();
    for (std::size_t i = 0; i < original; ++i) {
        const auto [u, v] = t.edges[i];
        if (uniform(0.0, 1.0, rng) < fraction && !t.has_edge(v, u)) t.edges.emplace_back(v, u);
    }
}

void add_cross_edges(Topology& t, std::size_t count, Rng& rng) {
    if (t.n < 2) return;
    for (std::size_t added = 0, tries = 0; added < count && tries < 100 * count; ++tries) {
        const auto u = static_cast<NodeId>(uniform_index(t.n, rng));
        const auto v = static_cast<NodeId>(uniform_index(t.n, rng));
        if (u == v || linked(t, u, v)) continue;
        t.edges.emplace_back(u, v);
        ++added;
    }
}

void rewire_subtrees(Topology& t, double fraction, Rng& rng) {
    const std::size_t n = t.n;
    constexpr NodeId kNone = static_cast<NodeId>(-1);
    std::vector<NodeId> parent(n, kNone);
    for (const auto& [u, v] : t.edges) {
        if (parent[v] != kNone) throw Error(ErrorCode::InvalidGraph, "rewire_subtrees expects a tree");
        parent[v] = u;
    }
    std::vector<NodeId> children_of;
    const auto moves = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(t.edges.size())));
    for (std::size_t m = 0; m < moves; ++m) {
        std::vector<NodeId> movable;
        for (NodeId v = 0; v < n; ++v) {
            if (parent[v] != kNone) movable.push_back(v);
        }
        if (movable.empty()) break;
        const NodeId c = movable[uniform_index(movable.size(), rng)];
        // Mark c's subtree by walking each node's ancestor chain.
        std::vector<bool> inside(n, false);
        for (NodeId v = 0; v < n; ++v) {
            for (NodeId a = v; a != kNone; a = parent[a]) {
                if (a == c) {
                    inside[v] = true;
                    break;
                }
            }
        }
        std::vector<NodeId> options;
        for (NodeId w = 0; w < n; ++w) {
            if (!inside[w] && w != parent[c]) options.push_back(w);
        }
        if (options.empty()) continue;
        parent[c] = options[uniform_index(options.size(), rng)];
    }
    t.edges.clear();
    for (NodeId v = 0; v < n; ++v) {
        if (parent[v] != kNone) t.edges.emplace_back(parent[v], v);
    }
}

GraphSnapshot with_attributes(const Topology& t, double timestamp, const AttributeRanges& ranges, Rng& rng) {
    std::vector<NodeAttributes> nodes;
    nodes.reserve(t.n);
    for (NodeId v = 0; v < t.n; ++v) {
        const double load = uniform(0.0, ranges.load_max, rng);
        const double fitness = uniform(ranges.fitness_min, 1.0, rng);
        nodes.push_back({v, load, fitness});
    }
    std::vector<DirectedEdge> edges;
    edges.reserve(t.edges.size());
    for (const auto& [u, v] : t.edges) edges.push_back({u, v, uniform(ranges.reliability_min, 1.0, rng)});
    return GraphSnapshot(timestamp, std::move(nodes), std::move(edges));
}

std::vector<Route> enumerate_routes(const GraphSnapshot& g, const RouteEnumerationOptions& opts, Rng& rng) {
    if (g.empty() || opts.count == 0) return {};
    const std::size_t n = g.node_count();
    const std::size_t max_len = std::max<std::size_t>(1, opts.max_length);
    const std::size_t pool_target = 3 * opts.count;

    auto walk = [&](std::size_t target) {
        std::vector<NodeId> path;
        std::vector<bool> seen(n, false);
        std::size_t u = uniform_index(n, rng);
        path.push_back(g.node_at(u).id);
        seen[u] = true;
        while (path.size() < target) {
            std::vector<std::size_t> next;
            for (std::size_t e : g.out_edges(u)) {
                if (!seen[g.dst_index(e)]) next.push_back(g.dst_index(e));
            }
            if (next.empty()) break;
            u = next[uniform_index(next.size(), rng)];
            seen[u] = true;
            path.push_back(g.node_at(u).id);
        }
        return path;
    };

    std::vector<std::vector<NodeId>> pool;
    std::set<std::vector<NodeId>> distinct;
    // Relax the minimum length until the pool is large enough.
    for (std::size_t min_len = std::min(opts.preferred_min_length, max_len); min_len >= 1 && pool.size() < pool_target;
         --min_len) {
        for (std::size_t a = 0; a < opts.attempts && pool.size() < pool_target; ++a) {
            const auto target = std::uniform_int_distribution<std::size_t>(min_len, max_len)(rng);
            auto path = walk(target);
            if (path.size() < min_len || !distinct.insert(path).second) continue;
            pool.push_back(std::move(path));
        }
    }

    auto overlap = [](const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
        std::size_t c = 0;
        for (NodeId v : a) c += static_cast<std::size_t>(std::find(b.begin(), b.end(), v) != b.end());
        return c;
    };
    std::vector<Route> routes;
    while (routes.size() < opts.count && !pool.empty()) {
        auto first = std::move(pool.front());
        pool.erase(pool.begin());
        if (!pool.empty() && routes.size() + 1 < opts.count) {
            std::size_t best = 0;
            for (std::size_t i = 1; i < pool.size(); ++i) {
                if (overlap(first, pool[i]) < overlap(first, pool[best])) best = i;
            }
            routes.emplace_back(std::move(first));
            routes.emplace_back(std::move(pool[best]));
            pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
        } else {
            routes.emplace_back(std::move(first));
        }
    }
    return routes;
}

}  // namespace routerisk::bench
