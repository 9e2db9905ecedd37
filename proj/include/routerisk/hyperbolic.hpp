#pragma once

// Poincare-ball embedding, curvature fitting and the hyperbolic route score.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "routerisk/graph.hpp"
#include "routerisk/scoring.hpp"
#include "routerisk/temporal.hpp"

namespace routerisk {

/// Distance in the Poincare ball of curvature -kappa. Throws Error(OutOfBall)
/// when a point is not strictly inside radius 1/sqrt(kappa).
double geodesic_distance(std::span<const double> a, std::span<const double> b, double kappa);

/// Distance from the ball's origin: (2/sqrt(kappa)) artanh(sqrt(kappa) |z|).
double radial_distance(std::span<const double> z, double kappa);

struct EmbeddingOptions {
    std::size_t dimension = 2;
    std::size_t iterations = 150;
    std::uint64_t seed = 0;
    double init_scale = 0.05;           // init stddev, in units of the ball radius
    double relative_tolerance = 1e-6;   // stop when an accepted step improves stress by less

    bool operator==(const EmbeddingOptions&) const = default;
};

struct HyperbolicEmbedding {
    std::size_t dimension = 2;
    double curvature = 1.0;
    std::vector<NodeId> nodes;       // every snapshot node, id-sorted
    std::vector<double> coords;      // nodes.size() x dimension, row-major
    std::vector<bool> embedded;      // false outside the largest component (kept at origin)
    std::vector<int> hops;           // nodes.size()^2 undirected hop distances, -1 if unreachable
    double initial_stress = 0.0;
    double final_stress = 0.0;
    std::size_t iterations_run = 0;
    bool partial = false;            // projection was disconnected

    std::optional<std::size_t> index_of(NodeId v) const noexcept;
    std::span<const double> coord(std::size_t index) const {
        return {coords.data() + index * dimension, dimension};
    }
    int hop(std::size_t i, std::size_t j) const { return hops[i * nodes.size() + j]; }
};

/// Minimizes sum_{u<v} (geodesic(z_u, z_v) - hops(u, v))^2 over the largest
/// component by backtracking gradient descent from a seeded start near the
/// origin. Stress never increases across accepted steps.
HyperbolicEmbedding embed(const GraphSnapshot& g, double kappa, const EmbeddingOptions& opts);

struct GoldenSectionResult {
    double argmin = 0.0;
    double minimum = 0.0;
    std::size_t evaluations = 0;
};

/// Golden-section search on [lo, hi]. Both endpoints are evaluated as well,
/// and the best evaluated point is returned. Stops when the bracket is
/// narrower than `tolerance` or after `max_evaluations` calls.
GoldenSectionResult golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                                            double tolerance, std::size_t max_evaluations);

struct HyperbolicWeights {
    double compactness = 1.0;
    double tail = 1.0;
    double frontier = 1.0;
    double bottleneck = 1.0;
    double decoder = 1.0;

    bool operator==(const HyperbolicWeights&) const = default;
};

struct HyperbolicConfig {
    EmbeddingOptions embedding;
    double kappa_min = 0.10;
    double kappa_max = 4.50;
    double bracket_tolerance = 0.01;
    std::size_t max_evaluations = 40;
    HyperbolicWeights weights;
    bool excitation = true;  // false: score with lambda instead of lambda-tilde

    void validate() const;
    bool operator==(const HyperbolicConfig&) const = default;
};

struct CurvatureFit {
    double kappa = 0.10;
    HyperbolicEmbedding embedding;
    std::size_t evaluations = 0;
    bool degenerate = false;  // fewer than two nodes in the largest component
};

CurvatureFit fit_curvature(const GraphSnapshot& g, const HyperbolicConfig& cfg);

/// Curvature fits keyed by snapshot topology and embedding settings.
/// Concurrent lookups share a lock; inserts take it exclusively.
class EmbeddingCache {
public:
    std::shared_ptr<const CurvatureFit> get_or_fit(const GraphSnapshot& g, const HyperbolicConfig& cfg);
    std::size_t size() const;
    void clear();

private:
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::uint64_t, std::shared_ptr<const CurvatureFit>> fits_;
};

/// w1 C - w2 T - w3 F - w4 B + w5 D; see README for the term definitions.
RouteScore route_score_hyperbolic(const ScoringContext& ctx, const Route& route, const IntensityConfig& intensity,
                                  const HyperbolicConfig& cfg, const CurvatureFit& fit);

class HyperbolicScorer final : public RouteScorer {
public:
    HyperbolicScorer(IntensityConfig intensity, HyperbolicConfig cfg,
                     std::shared_ptr<EmbeddingCache> cache = std::make_shared<EmbeddingCache>())
        : intensity_(std::move(intensity)), cfg_(std::move(cfg)), cache_(std::move(cache)) {}

    std::string name() const override { return cfg_.excitation ? "hyperbolic" : "hyperbolic_no_excitation"; }
    RouteScore score(const ScoringContext& ctx, const Route& route) const override;

    const HyperbolicConfig& config() const noexcept { return cfg_; }
    EmbeddingCache& cache() const noexcept { return *cache_; }

private:
    IntensityConfig intensity_;
    HyperbolicConfig cfg_;
    std::shared_ptr<EmbeddingCache> cache_;
};

}  // namespace routerisk
