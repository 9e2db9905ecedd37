#include "routerisk/bench/comparators.hpp"

#include <algorithm>

#include "hashing.hpp"
#include "routerisk/error.hpp"
#include "routerisk/topology.hpp"

namespace routerisk::bench {

namespace {

std::uint64_t state_key(const GraphSnapshot& g, std::span<const FailureEvent> events) {
    return detail::derive_seed(g.content_hash(), hash_events(events));
}

}  // namespace

double native_score(const GraphSnapshot& g, const Route& r) {
    validate_route(g, r);
    double fitness = 0.0;
    double load = 0.0;
    for (NodeId v : r.nodes()) {
        fitness += g.node(v).fitness;
        load += g.node(v).load;
    }
    const double n = static_cast<double>(r.size());
    return (fitness / n) * (1.0 - 0.5 * (load / n));
}

RouteScore NativeScorer::score(const ScoringContext& ctx, const Route& route) const {
    const double v = native_score(ctx.graph, route);
    return {v, {{"native", v}}};
}

RouteScore structural_baseline_score(const ScoringContext& ctx, const Route& r, const IntensityConfig& intensity) {
    const GraphSnapshot& g = ctx.graph;
    validate_route(g, r);
    const auto lambda = intensities_by_node(ctx.time, ctx.events, ctx.route_id, intensity);
    auto damped = [&](NodeId v) {
        const auto it = lambda.find(v);
        return it == lambda.end() ? 0.0 : it->second.damped;
    };
    std::size_t max_degree = 0;
    for (std::size_t i = 0; i < g.node_count(); ++i)
        max_degree = std::max(max_degree, g.out_edges(i).size() + g.in_edges(i).size());

    double centrality = 0.0;
    double load = 0.0;
    double neighbourhood = 0.0;
    std::vector<std::size_t> reach;
    for (NodeId v : r.nodes()) {
        const std::size_t i = g.index_of(v);
        const std::size_t degree = g.out_edges(i).size() + g.in_edges(i).size();
        if (max_degree > 0)
            centrality += static_cast<double>(degree) / static_cast<double>(max_degree) * damped(v);
        load += 0.5 * g.node_at(i).load;

        reach.clear();
        for (std::size_t e : g.out_edges(i)) {
            const std::size_t u = g.dst_index(e);
            reach.push_back(u);
            for (std::size_t e2 : g.out_edges(u)) reach.push_back(g.dst_index(e2));
        }
        std::sort(reach.begin(), reach.end());
        reach.erase(std::unique(reach.begin(), reach.end()), reach.end());
        reach.erase(std::remove(reach.begin(), reach.end(), i), reach.end());
        if (!reach.empty()) {
            double s = 0.0;
            for (std::size_t u : reach) s += damped(g.node_at(u).id);
            neighbourhood += s / static_cast<double>(reach.size());
        }
    }
    return {-(centrality + load + neighbourhood),
            {{"centrality", centrality}, {"load", load}, {"neighbourhood", neighbourhood}}};
}

RouteScore hand_switching_score(const ScoringContext& ctx, const Route& r, const HyperbolicScorer& hyperbolic,
                                const EuclideanScorer& euclidean, double threshold) {
    const double rank = cycle_rank_norm(ctx.graph);
    RouteScore s = rank < threshold ? hyperbolic.score(ctx, r) : euclidean.score(ctx, r);
    s.terms.push_back({"cycle_rank", rank});
    s.terms.push_back({"hyperbolic_branch", rank < threshold ? 1.0 : 0.0});
    return s;
}

OracleScorer::OracleScorer(std::span<const Scenario> scenarios) {
    for (const auto& s : scenarios) {
        const auto events = s.events();
        const auto nodes = s.attacked().nodes();
        attacked_.emplace(state_key(s.snapshot, events), std::vector<NodeId>(nodes.begin(), nodes.end()));
    }
}

RouteScore OracleScorer::score(const ScoringContext& ctx, const Route& route) const {
    const auto nodes = route.nodes();
    const bool hit = attacked_.contains({state_key(ctx.graph, ctx.events), std::vector<NodeId>(nodes.begin(), nodes.end())});
    const double v = hit ? -1.0 : 0.0;
    return {v, {{"oracle", v}}};
}

}  // namespace routerisk::bench
