#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "routerisk/graph.hpp"

namespace routerisk {

struct ScoreTerm {
    std::string name;
    double value = 0.0;
};

/// Route score, higher = safer, with the terms that produced it.
struct RouteScore {
    double value = 0.0;
    std::vector<ScoreTerm> terms;

    /// Named term value; NaN when absent.
    double term(std::string_view name) const noexcept;
};

/// What a scorer sees for one call: the snapshot, the failure history and
/// the scoring time. `route_id` selects route-tagged events.
struct ScoringContext {
    const GraphSnapshot& graph;
    std::span<const FailureEvent> events;
    double time = 0.0;
    std::optional<RouteId> route_id;
};

class RouteScorer {
public:
    virtual ~RouteScorer() = default;
    virtual std::string name() const = 0;
    virtual RouteScore score(const ScoringContext& ctx, const Route& route) const = 0;
};

}  // namespace routerisk
