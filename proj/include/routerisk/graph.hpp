#pragma once

// Core data model: execution-graph snapshots, routes and failure events.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace routerisk {

using NodeId = std::uint32_t;
using RouteId = std::uint32_t;

struct NodeAttributes {
    NodeId id = 0;
    double load = 0.0;     // normalized, [0,1]
    double fitness = 1.0;  // smoothed success rate, [0,1]

    bool operator==(const NodeAttributes&) const = default;
};

struct DirectedEdge {
    NodeId src = 0;
    NodeId dst = 0;
    double reliability = 1.0;  // [0,1]

    bool operator==(const DirectedEdge&) const = default;
};

/// Immutable directed graph at one time instant.
///
/// Nodes are kept sorted by id and edges by (src, dst); node "indices" used by
/// the adjacency accessors are positions in that sorted order, so iteration
/// order is deterministic and independent of construction order.
class GraphSnapshot {
public:
    GraphSnapshot() = default;

    /// Validates and canonicalizes. Throws Error(InvalidGraph) on duplicate
    /// nodes or edges, self-loops, dangling endpoints, or attributes outside
    /// [0,1].
    GraphSnapshot(double timestamp, std::vector<NodeAttributes> nodes,
                  std::vector<DirectedEdge> edges);

    double timestamp() const noexcept { return timestamp_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }

    std::span<const NodeAttributes> nodes() const noexcept { return nodes_; }
    std::span<const DirectedEdge> edges() const noexcept { return edges_; }

    bool contains(NodeId id) const noexcept { return find_index(id).has_value(); }
    std::optional<std::size_t> find_index(NodeId id) const noexcept;
    /// Throws Error(InvalidRoute) when the node is absent.
    std::size_t index_of(NodeId id) const;
    const NodeAttributes& node(NodeId id) const { return nodes_[index_of(id)]; }
    const NodeAttributes& node_at(std::size_t index) const { return nodes_[index]; }

    /// Edge ids (positions in edges()) leaving / entering the node at `index`.
    std::span<const std::size_t> out_edges(std::size_t index) const { return out_[index]; }
    std::span<const std::size_t> in_edges(std::size_t index) const { return in_[index]; }
    /// Index of an edge's endpoint.
    std::size_t src_index(std::size_t edge_id) const { return edge_src_[edge_id]; }
    std::size_t dst_index(std::size_t edge_id) const { return edge_dst_[edge_id]; }

    std::optional<std::size_t> find_edge(NodeId src, NodeId dst) const noexcept;
    bool has_edge(NodeId src, NodeId dst) const noexcept { return find_edge(src, dst).has_value(); }

    /// Hash over ids and the edge set only.
    std::uint64_t topology_hash() const noexcept;
    /// Hash over everything, attributes and timestamp included.
    std::uint64_t content_hash() const noexcept;

    bool operator==(const GraphSnapshot& other) const noexcept {
        return timestamp_ == other.timestamp_ && nodes_ == other.nodes_ && edges_ == other.edges_;
    }

private:
    double timestamp_ = 0.0;
    std::vector<NodeAttributes> nodes_;
    std::vector<DirectedEdge> edges_;
    std::vector<std::size_t> edge_src_;
    std::vector<std::size_t> edge_dst_;
    std::vector<std::vector<std::size_t>> out_;
    std::vector<std::vector<std::size_t>> in_;
};

/// Ordered chain of distinct nodes, length >= 1.
class Route {
public:
    Route() = default;
    explicit Route(std::vector<NodeId> nodes);

    std::span<const NodeId> nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    NodeId front() const { return nodes_.front(); }
    NodeId back() const { return nodes_.back(); }
    bool contains(NodeId id) const noexcept;

    bool operator==(const Route&) const = default;

private:
    std::vector<NodeId> nodes_;
};

/// Throws Error(InvalidRoute) unless every route node exists in `g`.
void validate_route(const GraphSnapshot& g, const Route& r);

struct FailureEvent {
    double time = 0.0;
    NodeId node = 0;
    double severity = 0.0;
    std::string category = "failure";
    std::optional<RouteId> route_tag;

    bool operator==(const FailureEvent&) const = default;
};

/// Throws Error(InvalidEvent) for a non-finite/negative time or severity outside [0,1].
void validate_event(const FailureEvent& e);

std::uint64_t hash_events(std::span<const FailureEvent> events) noexcept;

}  // namespace routerisk
