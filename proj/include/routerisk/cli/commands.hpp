#pragma once

// Subcommand implementations behind the `routerisk` binary. Each command
// reads and writes the files named in RunConfig::paths.

#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "routerisk/bench/comparators.hpp"
#include "routerisk/bench/evaluate.hpp"
#include "routerisk/cascade.hpp"
#include "routerisk/gate.hpp"
#include "routerisk/io/config.hpp"

namespace routerisk::cli {

/// Shared scorer instances for one run; geometry scorers share one embedding cache.
struct ScorerSet {
    std::shared_ptr<EmbeddingCache> cache;
    std::shared_ptr<const HyperbolicScorer> hyperbolic;
    std::shared_ptr<const HyperbolicScorer> hyperbolic_no_excitation;
    std::shared_ptr<const EuclideanScorer> euclidean;
    std::optional<GateModel> gate;

    explicit ScorerSet(const io::RunConfig& cfg, std::optional<GateModel> gate_model = std::nullopt);

    /// Throws Error(InvalidConfig) for unknown names and Error(Io) when
    /// learned_gate is requested without a model. `scenarios` feeds the oracle.
    std::unique_ptr<RouteScorer> make(const std::string& name, const io::RunConfig& cfg,
                                      std::span<const bench::Scenario> scenarios = {}) const;
};

struct GenResult {
    std::size_t regime_scenarios = 0;
    std::size_t family_scenarios = 0;
};
GenResult cmd_gen(const io::RunConfig& cfg, std::ostream& log);

struct TrainResult {
    std::size_t examples = 0;
    std::size_t positives = 0;
    bool single_class = false;
    double initial_loss = 0.0;
    double final_loss = 0.0;
};
TrainResult cmd_train(const io::RunConfig& cfg, std::ostream& log);

struct SuiteEvaluation {
    std::string suite;  // "regimes" or "families"
    std::vector<bench::EvaluationResult> results;
};

struct EvalResult {
    std::vector<SuiteEvaluation> suites;
    std::optional<GateDiagnostics> gate;
};
EvalResult cmd_eval(const io::RunConfig& cfg, std::ostream& log);

std::vector<CriticalityReport> cmd_cascade(const io::RunConfig& cfg, std::ostream& log);

struct LatencyRow {
    std::string scorer;
    std::size_t calls = 0;
    double mean_us = 0.0;
    double median_us = 0.0;
    double p95_us = 0.0;
};
std::vector<LatencyRow> cmd_bench(const io::RunConfig& cfg, std::ostream& log);

/// Per-call wall time of `scorer` cycling through both routes of each scenario.
LatencyRow measure_latency(const RouteScorer& scorer, std::span<const bench::Scenario> scenarios, std::size_t calls);

/// Scenarios whose split matches "eval", "train" or "all".
std::vector<bench::Scenario> select_split(std::span<const bench::Scenario> scenarios, const std::string& split);

/// CSV renderings used by the commands.
std::string criticality_csv(std::span<const CriticalityReport> reports);
std::string scenario_rows_csv(std::span<const SuiteEvaluation> suites);
std::string latency_csv(std::span<const LatencyRow> rows);

}  // namespace routerisk::cli
