#pragma once

// Baseline scorers the geometry scorers are compared against.

#include <cstdint>
#include <memory>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "routerisk/bench/scenario.hpp"
#include "routerisk/euclidean.hpp"
#include "routerisk/hyperbolic.hpp"
#include "routerisk/scoring.hpp"
#include "routerisk/temporal.hpp"

namespace routerisk::bench {

/// mean fitness x (1 - 0.5 mean load). Event-blind. Throws Error(InvalidRoute).
double native_score(const GraphSnapshot& g, const Route& r);

/// -sum_v [deg(v)/max_deg lt(v) + 0.5 load(v) + mean_{u in N<=2(v)} lt(u)],
/// lt = damped intensity, deg = total degree, N<=2 = 2-hop out-neighbourhood
/// without v. Throws Error(InvalidRoute).
RouteScore structural_baseline_score(const ScoringContext& ctx, const Route& r, const IntensityConfig& intensity);

/// Hyperbolic score below the cycle-rank threshold, Euclidean otherwise.
RouteScore hand_switching_score(const ScoringContext& ctx, const Route& r, const HyperbolicScorer& hyperbolic,
                                const EuclideanScorer& euclidean, double threshold = 0.05);

class NativeScorer final : public RouteScorer {
public:
    std::string name() const override { return "native"; }
    RouteScore score(const ScoringContext& ctx, const Route& route) const override;
};

class StructuralScorer final : public RouteScorer {
public:
    explicit StructuralScorer(IntensityConfig intensity) : intensity_(std::move(intensity)) {}
    std::string name() const override { return "structural"; }
    RouteScore score(const ScoringContext& ctx, const Route& route) const override {
        return structural_baseline_score(ctx, route, intensity_);
    }

private:
    IntensityConfig intensity_;
};

class HandSwitchingScorer final : public RouteScorer {
public:
    HandSwitchingScorer(std::shared_ptr<const HyperbolicScorer> hyperbolic,
                        std::shared_ptr<const EuclideanScorer> euclidean, double threshold = 0.05)
        : hyperbolic_(std::move(hyperbolic)), euclidean_(std::move(euclidean)), threshold_(threshold) {}
    std::string name() const override { return "hand_switching"; }
    RouteScore score(const ScoringContext& ctx, const Route& route) const override {
        return hand_switching_score(ctx, route, *hyperbolic_, *euclidean_, threshold_);
    }

private:
    std::shared_ptr<const HyperbolicScorer> hyperbolic_;
    std::shared_ptr<const EuclideanScorer> euclidean_;
    double threshold_;
};

/// Knows which route is attacked in each scenario: -1 for it, 0 otherwise.
class OracleScorer final : public RouteScorer {
public:
    explicit OracleScorer(std::span<const Scenario> scenarios);
    std::string name() const override { return "oracle"; }
    RouteScore score(const ScoringContext& ctx, const Route& route) const override;

private:
    std::set<std::pair<std::uint64_t, std::vector<NodeId>>> attacked_;
};

class ConstantScorer final : public RouteScorer {
public:
    explicit ConstantScorer(double value = 0.0) : value_(value) {}
    std::string name() const override { return "constant"; }
    RouteScore score(const ScoringContext&, const Route&) const override { return {value_, {{"constant", value_}}}; }

private:
    double value_;
};

}  // namespace routerisk::bench
