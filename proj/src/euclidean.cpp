#include "routerisk/euclidean.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "routerisk/error.hpp"
#include "routerisk/topology.hpp"

namespace routerisk {

double RouteScore::term(std::string_view name) const noexcept {
    for (const auto& t : terms) {
        if (t.name == name) return t.value;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

void EuclideanConfig::validate() const {
    if (steps < 1) throw Error(ErrorCode::InvalidConfig, "euclidean steps must be >= 1");
    if (!(recovery_base >= 0.0 && recovery_base <= 1.0))
        throw Error(ErrorCode::InvalidConfig, "recovery_base must lie in [0,1]");
    if (!(diffusion_strength >= 0.0) || !(max_risk > 0.0))
        throw Error(ErrorCode::InvalidConfig, "diffusion_strength must be >= 0 and max_risk > 0");
    const auto& w = weights;
    for (double x : {w.infected_mass, w.frontier, w.tail, w.latency, w.bottleneck}) {
        if (!(x >= 0.0)) throw Error(ErrorCode::InvalidConfig, "euclidean weights must be >= 0");
    }
}

double PropagationState::at(NodeId v) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), v);
    if (it == nodes.end() || *it != v)
        throw Error(ErrorCode::MissingIntensity, "node " + std::to_string(v) + " not in propagation state");
    return risk[static_cast<std::size_t>(it - nodes.begin())];
}

PropagationState init_state(const GraphSnapshot& sub, const std::map<NodeId, double>& intensities) {
    PropagationState state;
    state.nodes.reserve(sub.node_count());
    state.risk.reserve(sub.node_count());
    for (const auto& n : sub.nodes()) {
        auto it = intensities.find(n.id);
        if (it == intensities.end())
            throw Error(ErrorCode::MissingIntensity, "no intensity for node " + std::to_string(n.id));
        state.nodes.push_back(n.id);
        state.risk.push_back(it->second);
    }
    return state;
}

PropagationState propagate_step(const PropagationState& state, const GraphSnapshot& sub,
                                const EuclideanConfig& cfg) {
    PropagationState next;
    next.nodes = state.nodes;
    next.step = state.step + 1;
    next.risk.resize(state.risk.size());
    for (std::size_t u = 0; u < sub.node_count(); ++u) {
        const double load = sub.node_at(u).load;
        const double recovery = cfg.recovery_base * (1.0 - load);
        double x = (1.0 - recovery) * state.risk[u];
        for (std::size_t e : sub.in_edges(u)) {
            const double eta = cfg.diffusion_strength * sub.edges()[e].reliability * (0.5 + 0.5 * load);
            x += eta * state.risk[sub.src_index(e)];
        }
        next.risk[u] = std::clamp(x, 0.0, cfg.max_risk);
    }
    return next;
}

RouteScore route_score_euclidean(const ScoringContext& ctx, const Route& route,
                                 const IntensityConfig& intensity, const EuclideanConfig& cfg) {
    const GraphSnapshot sub = route_subgraph(ctx.graph, route);

    std::map<NodeId, double> seeds;
    for (NodeId v : route.nodes())
        seeds[v] = damped_intensity(v, ctx.time, ctx.events, ctx.route_id, intensity).damped;
    PropagationState state = init_state(sub, seeds);
    for (std::size_t k = 0; k < cfg.steps; ++k) state = propagate_step(state, sub, cfg);

    const double n = static_cast<double>(state.risk.size());
    double mass = 0.0;
    double tail = 0.0;
    for (double x : state.risk) {
        mass += x;
        tail = std::max(tail, x);
    }
    mass /= n;

    // Frontier: last third of the route, nodes with an out-edge leaving the route.
    const std::size_t len = route.size();
    const std::size_t first_frontier = len - (len + 2) / 3;
    double frontier = 0.0;
    std::size_t frontier_nodes = 0;
    for (std::size_t i = first_frontier; i < len; ++i) {
        const NodeId v = route.nodes()[i];
        const std::size_t gi = ctx.graph.index_of(v);
        const bool leaves = std::any_of(ctx.graph.out_edges(gi).begin(), ctx.graph.out_edges(gi).end(),
                                        [&](std::size_t e) { return !route.contains(ctx.graph.edges()[e].dst); });
        if (leaves) {
            frontier += state.at(v);
            ++frontier_nodes;
        }
    }
    if (frontier_nodes > 0) frontier /= static_cast<double>(frontier_nodes);

    double latency = 0.0;
    for (const auto& e : sub.edges()) latency += 1.0 - e.reliability;
    if (sub.edge_count() > 0) latency /= static_cast<double>(sub.edge_count());

    double bottleneck = 0.0;
    for (const auto& node : sub.nodes()) bottleneck = std::max(bottleneck, node.load);

    const auto& w = cfg.weights;
    RouteScore out;
    out.value = -(w.infected_mass * mass + w.frontier * frontier + w.tail * tail + w.latency * latency +
                  w.bottleneck * bottleneck);
    out.terms = {{"infected_mass", mass}, {"frontier", frontier}, {"tail", tail},
                 {"latency", latency},    {"bottleneck", bottleneck}};
    return out;
}

}  // namespace routerisk
