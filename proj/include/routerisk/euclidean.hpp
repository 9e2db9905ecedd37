#pragma once

// Euclidean diffusion of node risk over a route subgraph.

#include <cstddef>
#include <map>
#include <vector>

#include "routerisk/graph.hpp"
#include "routerisk/scoring.hpp"
#include "routerisk/temporal.hpp"

namespace routerisk {

struct EuclideanWeights {
    double infected_mass = 1.0;
    double frontier = 1.0;
    double tail = 1.0;
    double latency = 1.0;
    double bottleneck = 1.0;

    bool operator==(const EuclideanWeights&) const = default;
};

struct EuclideanConfig {
    std::size_t steps = 5;
    double recovery_base = 0.2;       // rho_u = recovery_base * (1 - load(u))
    double diffusion_strength = 0.5;  // eta_vu = strength * w(v,u) * (0.5 + 0.5 * load(u))
    double max_risk = 10.0;
    EuclideanWeights weights;

    void validate() const;
    bool operator==(const EuclideanConfig&) const = default;
};

/// Risk per node, aligned with the subgraph's (id-sorted) node order.
struct PropagationState {
    std::vector<NodeId> nodes;
    std::vector<double> risk;
    std::size_t step = 0;

    double at(NodeId v) const;
};

/// x_0(v) = intensity(v). Throws Error(MissingIntensity) if a node lacks one.
PropagationState init_state(const GraphSnapshot& sub, const std::map<NodeId, double>& intensities);

/// One synchronous update
///   x'(u) = (1 - rho_u) x(u) + sum_{(v,u)} eta_vu x(v), clamped to [0, max_risk].
PropagationState propagate_step(const PropagationState& state, const GraphSnapshot& sub,
                                const EuclideanConfig& cfg);

/// Propagates damped intensities for cfg.steps over the route's induced
/// subgraph and returns -(weighted infected mass, frontier, tail, latency,
/// bottleneck). Throws Error(InvalidRoute).
RouteScore route_score_euclidean(const ScoringContext& ctx, const Route& route,
                                 const IntensityConfig& intensity, const EuclideanConfig& cfg);

class EuclideanScorer final : public RouteScorer {
public:
    EuclideanScorer(IntensityConfig intensity, EuclideanConfig cfg)
        : intensity_(std::move(intensity)), cfg_(cfg) {}

    std::string name() const override { return "euclidean"; }
    RouteScore score(const ScoringContext& ctx, const Route& route) const override {
        return route_score_euclidean(ctx, route, intensity_, cfg_);
    }

private:
    IntensityConfig intensity_;
    EuclideanConfig cfg_;
};

}  // namespace routerisk
