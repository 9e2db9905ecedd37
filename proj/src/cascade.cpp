#include "routerisk/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <thread>

#include "hashing.hpp"
#include "routerisk/error.hpp"
#include "routerisk/topology.hpp"

namespace routerisk {

GraphSnapshot generate_expansion_tree(double branching, std::size_t depth) {
    if (!(branching >= 1.0)) throw Error(ErrorCode::InvalidConfig, "branching factor must be >= 1");
    std::vector<NodeAttributes> nodes{{0, 0.0, 1.0}};
    std::vector<DirectedEdge> edges;
    std::vector<NodeId> previous{0};
    NodeId next = 1;
    for (std::size_t k = 1; k <= depth; ++k) {
        const auto size = static_cast<std::size_t>(std::llround(std::pow(branching, static_cast<double>(k))));
        std::vector<NodeId> shell;
        shell.reserve(size);
        for (std::size_t i = 0; i < size; ++i) {
            const NodeId v = next++;
            nodes.push_back({v, 0.0, 1.0});
            edges.push_back({previous[i % previous.size()], v, 1.0});
            shell.push_back(v);
        }
        previous = std::move(shell);
    }
    return GraphSnapshot(0.0, std::move(nodes), std::move(edges));
}

namespace {

// Fixed chunking keeps results independent of the number of worker threads.
constexpr std::size_t kChunks = 64;

struct ShellSums {
    std::vector<std::uint64_t> sum;
    std::vector<std::uint64_t> sum_sq;
};

}  // namespace

CascadeStats simulate_cascade(const GraphSnapshot& g, NodeId root, double p, std::size_t trials,
                              std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidConfig, "transmission probability outside [0,1]");
    const std::size_t n = g.node_count();
    const std::size_t root_index = g.index_of(root);

    // BFS depth from the root along directed edges defines the shells.
    std::vector<int> depth(n, -1);
    depth[root_index] = 0;
    std::deque<std::size_t> queue{root_index};
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
    // Only edges that advance one shell carry transmission.
    std::vector<std::vector<std::size_t>> children(n);
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        const std::size_t u = g.src_index(e);
        const std::size_t v = g.dst_index(e);
        if (depth[u] >= 0 && depth[v] == depth[u] + 1) children[u].push_back(v);
    }
    const std::size_t shells = static_cast<std::size_t>(max_depth) + 1;
    // p is compared against a raw 64-bit draw; p == 1 must always transmit.
    const long double scaled = static_cast<long double>(p) * 18446744073709551616.0L;

    std::vector<ShellSums> partial(kChunks, ShellSums{std::vector<std::uint64_t>(shells, 0),
                                                      std::vector<std::uint64_t>(shells, 0)});
    auto run_chunk = [&](std::size_t chunk) {
        const std::size_t begin = trials * chunk / kChunks;
        const std::size_t end = trials * (chunk + 1) / kChunks;
        std::mt19937_64 rng(detail::derive_seed(seed, chunk));
        std::vector<std::size_t> frontier;
        std::vector<std::size_t> next;
        std::vector<std::uint64_t> counts(shells);
        auto& out = partial[chunk];
        for (std::size_t t = begin; t < end; ++t) {
            std::fill(counts.begin(), counts.end(), 0);
            frontier.assign(1, root_index);
            counts[0] = 1;
            for (std::size_t r = 1; r < shells && !frontier.empty(); ++r) {
                next.clear();
                for (std::size_t u : frontier) {
                    for (std::size_t v : children[u]) {
                        if (p >= 1.0 || static_cast<long double>(rng()) < scaled) next.push_back(v);
                    }
                }
                counts[r] = next.size();
                frontier.swap(next);
            }
            for (std::size_t r = 0; r < shells; ++r) {
                out.sum[r] += counts[r];
                out.sum_sq[r] += counts[r] * counts[r];
            }
        }
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(kChunks, std::thread::hardware_concurrency()));
    if (workers == 1) {
        for (std::size_t c = 0; c < kChunks; ++c) run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t c = w; c < kChunks; c += workers) run_chunk(c);
            });
        }
        for (auto& t : pool) t.join();
    }

    CascadeStats stats;
    stats.trials = trials;
    stats.mean.assign(shells, 0.0);
    stats.std_error.assign(shells, 0.0);
    if (trials == 0) return stats;
    const double nt = static_cast<double>(trials);
    for (std::size_t r = 0; r < shells; ++r) {
        std::uint64_t s = 0;
        std::uint64_t s2 = 0;
        for (const auto& part : partial) {
            s += part.sum[r];
            s2 += part.sum_sq[r];
        }
        const double mean = static_cast<double>(s) / nt;
        stats.mean[r] = mean;
        if (trials > 1) {
            const double var = std::max(0.0, (static_cast<double>(s2) - nt * mean * mean) / (nt - 1.0));
            stats.std_error[r] = std::sqrt(var / nt);
        }
    }
    return stats;
}

std::string to_string(Criticality c) {
    switch (c) {
        case Criticality::Subcritical: return "subcritical";
        case Criticality::Critical: return "critical";
        case Criticality::Supercritical: return "supercritical";
    }
    return "unknown";
}

CriticalityReport criticality_report(double branching, std::span<const double> p_grid, std::size_t depth,
                                     std::size_t trials, std::uint64_t seed, double epsilon) {
    if (!(branching > 1.0)) throw Error(ErrorCode::InvalidConfig, "criticality needs branching > 1");
    CriticalityReport report;
    report.branching = branching;
    report.analytic_threshold = std::exp(-std::log(branching));
    const GraphSnapshot tree = generate_expansion_tree(branching, depth);

    for (std::size_t i = 0; i < p_grid.size(); ++i) {
        const double p = p_grid[i];
        const auto stats = simulate_cascade(tree, 0, p, trials, detail::derive_seed(seed, i));
        std::vector<double> r;
        std::vector<double> log_mean;
        for (std::size_t k = 0; k < stats.mean.size(); ++k) {
            if (stats.mean[k] <= 0.0) continue;
            r.push_back(static_cast<double>(k));
            log_mean.push_back(std::log(stats.mean[k]));
        }
        CriticalityRow row;
        row.p = p;
        // Extinct after the root: growth is as negative as the data can show.
        row.slope = r.size() >= 2 ? ols_slope(r, log_mean) : -std::numeric_limits<double>::infinity();
        if (row.slope > epsilon)
            row.classification = Criticality::Supercritical;
        else if (row.slope < -epsilon)
            row.classification = Criticality::Subcritical;
        else
            row.classification = Criticality::Critical;
        report.rows.push_back(row);
    }

    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        const auto& a = report.rows[i - 1];
        const auto& b = report.rows[i];
        if (a.slope <= 0.0 && b.slope > 0.0) {
            if (!std::isfinite(a.slope)) {
                report.empirical_threshold = a.p;
            } else {
                report.empirical_threshold = a.p + (b.p - a.p) * (-a.slope) / (b.slope - a.slope);
            }
            break;
        }
    }
    return report;
}

}  // namespace routerisk
