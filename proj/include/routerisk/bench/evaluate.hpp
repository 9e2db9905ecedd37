#pragma once

// Margin/win evaluation of a scorer over scenarios, and gate datasets.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "routerisk/bench/scenario.hpp"
#include "routerisk/bench/stats.hpp"
#include "routerisk/euclidean.hpp"
#include "routerisk/gate.hpp"
#include "routerisk/hyperbolic.hpp"
#include "routerisk/scoring.hpp"

namespace routerisk::bench {

struct ScenarioRow {
    std::string id;
    std::string group;
    Split split = Split::Train;
    std::uint64_t seed = 0;
    AttackProtocol protocol = AttackProtocol::SeverityLoad;
    double score_safe = 0.0;
    double score_attacked = 0.0;
    double margin = 0.0;  // score_safe - score_attacked
    bool win = false;     // margin > 0
    std::uint64_t state_hash = 0;  // snapshot + events presented to both routes
    std::vector<ScoreTerm> terms_safe;
    std::vector<ScoreTerm> terms_attacked;
};

struct GroupAggregate {
    std::string group;
    std::size_t count = 0;
    double mean_margin = 0.0;
    double win_rate = 0.0;
    Interval margin_ci;
    Interval win_ci;
};

struct FlaggedScenario {
    std::string id;
    std::string message;
};

struct EvaluationResult {
    std::string scorer;
    std::vector<ScenarioRow> rows;        // scenario order
    std::vector<FlaggedScenario> flagged;  // excluded from rows and aggregates
    std::vector<GroupAggregate> groups;   // first-appearance order
    GroupAggregate overall;

    const GroupAggregate* group(std::string_view name) const noexcept;
};

struct EvaluateOptions {
    std::size_t bootstrap_resamples = 400;
    std::uint64_t bootstrap_seed = 0;
    std::size_t threads = 1;
};

/// Scores both paired routes of every scenario against the same snapshot
/// and event state. A scorer exception flags and excludes the scenario.
EvaluationResult evaluate(const RouteScorer& scorer, std::span<const Scenario> scenarios,
                          const EvaluateOptions& opts = {});

/// Aggregates (per group and overall) recomputed from rows.
std::vector<GroupAggregate> aggregate_groups(std::span<const ScenarioRow> rows, const EvaluateOptions& opts = {});
GroupAggregate aggregate(std::string group, std::span<const ScenarioRow> rows, const EvaluateOptions& opts = {});

/// Sign test on scenarios won by exactly one of the two results, matched by id.
SignTest paired_sign_test(const EvaluationResult& a, const EvaluationResult& b);

/// Hash of what a scorer sees for a scenario.
std::uint64_t scenario_state_hash(const Scenario& s);

struct GateRecord {
    std::string scenario_id;
    std::string group;
    Split split = Split::Train;
    bool attacked_route = false;
    GateExample example;
};

/// Two examples per scenario (features of the attacked and of the safe
/// route) sharing the scenario's label 1[M_hyp >= M_euc].
std::vector<GateRecord> build_gate_records(std::span<const Scenario> scenarios, const HyperbolicScorer& hyperbolic,
                                           const EuclideanScorer& euclidean);

std::vector<GateExample> examples_of(std::span<const GateRecord> records, std::optional<Split> split = std::nullopt);

}  // namespace routerisk::bench
