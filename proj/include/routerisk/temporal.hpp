#pragma once

// Per-node temporal failure statistics: decayed intensity, burst statistic and
// the burst-augmented ("damped") intensity.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "routerisk/graph.hpp"

namespace routerisk {

struct IntensityConfig {
    double half_life = 30.0;         // h, seconds; e-folding time of exp(-dt/h)
    double excitation_decay = 5.0;   // delta, seconds
    std::map<std::string, double> category_multiplier;  // alpha(c); 1.0 when absent
    double burst_coefficient = 0.14;
    double baseline_threshold = 1.0;  // lambda_0

    double alpha(const std::string& category) const;
    /// Throws Error(InvalidConfig).
    void validate() const;

    bool operator==(const IntensityConfig&) const = default;
};

struct NodeIntensity {
    double base = 0.0;          // lambda
    double burst = 0.0;         // b, in [0,1]
    double mean_decayed = 0.0;  // lambda-bar
    double damped = 0.0;        // lambda-tilde
    std::size_t event_count = 0;
};

/// Events that count toward node `v` at time `t` when scoring `route`:
/// same node, time <= t, untagged or tagged with `route`.
bool event_applies(const FailureEvent& e, NodeId v, double t, std::optional<RouteId> route) noexcept;

double base_intensity(NodeId v, double t, std::span<const FailureEvent> events,
                      std::optional<RouteId> route, const IntensityConfig& cfg);

double burst_statistic(NodeId v, double t, std::span<const FailureEvent> events,
                       std::optional<RouteId> route, const IntensityConfig& cfg);

NodeIntensity damped_intensity(NodeId v, double t, std::span<const FailureEvent> events,
                               std::optional<RouteId> route, const IntensityConfig& cfg);

/// damped_intensity for every node with at least one applicable event.
/// Nodes absent from the map have all-zero intensity.
std::map<NodeId, NodeIntensity> intensities_by_node(double t, std::span<const FailureEvent> events,
                                                    std::optional<RouteId> route,
                                                    const IntensityConfig& cfg);

}  // namespace routerisk
