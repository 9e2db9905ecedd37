#include "routerisk/graph.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "hashing.hpp"
#include "routerisk/error.hpp"

namespace routerisk {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::EmptyGraph: return "EmptyGraph";
        case ErrorCode::InvalidGraph: return "InvalidGraph";
        case ErrorCode::InvalidRoute: return "InvalidRoute";
        case ErrorCode::InvalidEvent: return "InvalidEvent";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::MissingIntensity: return "MissingIntensity";
        case ErrorCode::OutOfBall: return "OutOfBall";
        case ErrorCode::CorruptModel: return "CorruptModel";
        case ErrorCode::DegenerateScenario: return "DegenerateScenario";
        case ErrorCode::Io: return "Io";
        case ErrorCode::Parse: return "Parse";
    }
    return "Unknown";
}

namespace {

bool unit_interval(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

}  // namespace

GraphSnapshot::GraphSnapshot(double timestamp, std::vector<NodeAttributes> nodes,
                             std::vector<DirectedEdge> edges)
    : timestamp_(timestamp), nodes_(std::move(nodes)), edges_(std::move(edges)) {
    if (!std::isfinite(timestamp_)) throw Error(ErrorCode::InvalidGraph, "non-finite timestamp");

    std::sort(nodes_.begin(), nodes_.end(),
              [](const NodeAttributes& a, const NodeAttributes& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (i > 0 && nodes_[i].id == nodes_[i - 1].id)
            throw Error(ErrorCode::InvalidGraph, "duplicate node " + std::to_string(nodes_[i].id));
        if (!unit_interval(nodes_[i].load) || !unit_interval(nodes_[i].fitness))
            throw Error(ErrorCode::InvalidGraph,
                        "node " + std::to_string(nodes_[i].id) + " load/fitness outside [0,1]");
    }

    std::sort(edges_.begin(), edges_.end(), [](const DirectedEdge& a, const DirectedEdge& b) {
        return a.src != b.src ? a.src < b.src : a.dst < b.dst;
    });
    out_.assign(nodes_.size(), {});
    in_.assign(nodes_.size(), {});
    edge_src_.resize(edges_.size());
    edge_dst_.resize(edges_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const auto& edge = edges_[e];
        const std::string label = std::to_string(edge.src) + "->" + std::to_string(edge.dst);
        if (edge.src == edge.dst) throw Error(ErrorCode::InvalidGraph, "self-loop " + label);
        if (e > 0 && edges_[e - 1].src == edge.src && edges_[e - 1].dst == edge.dst)
            throw Error(ErrorCode::InvalidGraph, "duplicate edge " + label);
        if (!unit_interval(edge.reliability))
            throw Error(ErrorCode::InvalidGraph, "reliability outside [0,1] on " + label);
        const auto s = find_index(edge.src);
        const auto d = find_index(edge.dst);
        if (!s || !d) throw Error(ErrorCode::InvalidGraph, "undeclared endpoint on " + label);
        edge_src_[e] = *s;
        edge_dst_[e] = *d;
        out_[*s].push_back(e);
        in_[*d].push_back(e);
    }
}

std::optional<std::size_t> GraphSnapshot::find_index(NodeId id) const noexcept {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                               [](const NodeAttributes& n, NodeId v) { return n.id < v; });
    if (it == nodes_.end() || it->id != id) return std::nullopt;
    return static_cast<std::size_t>(it - nodes_.begin());
}

std::size_t GraphSnapshot::index_of(NodeId id) const {
    auto idx = find_index(id);
    if (!idx) throw Error(ErrorCode::InvalidRoute, "node " + std::to_string(id) + " not in snapshot");
    return *idx;
}

std::optional<std::size_t> GraphSnapshot::find_edge(NodeId src, NodeId dst) const noexcept {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair{src, dst},
                               [](const DirectedEdge& e, const std::pair<NodeId, NodeId>& key) {
                                   return e.src != key.first ? e.src < key.first : e.dst < key.second;
                               });
    if (it == edges_.end() || it->src != src || it->dst != dst) return std::nullopt;
    return static_cast<std::size_t>(it - edges_.begin());
}

std::uint64_t GraphSnapshot::topology_hash() const noexcept {
    detail::Fnv1a h;
    h.add(static_cast<std::uint64_t>(nodes_.size()));
    for (const auto& n : nodes_) h.add(n.id);
    h.add(static_cast<std::uint64_t>(edges_.size()));
    for (const auto& e : edges_) {
        h.add(e.src);
        h.add(e.dst);
    }
    return h.value();
}

std::uint64_t GraphSnapshot::content_hash() const noexcept {
    detail::Fnv1a h;
    h.add(topology_hash());
    h.add(timestamp_);
    for (const auto& n : nodes_) {
        h.add(n.load);
        h.add(n.fitness);
    }
    for (const auto& e : edges_) h.add(e.reliability);
    return h.value();
}

Route::Route(std::vector<NodeId> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw Error(ErrorCode::InvalidRoute, "route must contain at least one node");
    std::unordered_set<NodeId> seen;
    for (NodeId v : nodes_) {
        if (!seen.insert(v).second)
            throw Error(ErrorCode::InvalidRoute, "route repeats node " + std::to_string(v));
    }
}

bool Route::contains(NodeId id) const noexcept {
    return std::find(nodes_.begin(), nodes_.end(), id) != nodes_.end();
}

void validate_route(const GraphSnapshot& g, const Route& r) {
    if (r.size() == 0) throw Error(ErrorCode::InvalidRoute, "empty route");
    for (NodeId v : r.nodes()) {
        if (!g.contains(v))
            throw Error(ErrorCode::InvalidRoute, "route node " + std::to_string(v) + " not in snapshot");
    }
}

void validate_event(const FailureEvent& e) {
    if (!std::isfinite(e.time) || e.time < 0.0)
        throw Error(ErrorCode::InvalidEvent, "event time must be finite and non-negative");
    if (!unit_interval(e.severity))
        throw Error(ErrorCode::InvalidEvent, "event severity outside [0,1]");
}

std::uint64_t hash_events(std::span<const FailureEvent> events) noexcept {
    detail::Fnv1a h;
    h.add(static_cast<std::uint64_t>(events.size()));
    for (const auto& e : events) {
        h.add(e.time);
        h.add(e.node);
        h.add(e.severity);
        h.add(e.category);
        h.add(e.route_tag.has_value());
        h.add(e.route_tag.value_or(0));
    }
    return h.value();
}

}  // namespace routerisk
