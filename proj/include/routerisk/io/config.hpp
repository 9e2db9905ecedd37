#pragma once

// Harness configuration: one JSON document, every field optional.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "routerisk/bench/scenario.hpp"
#include "routerisk/euclidean.hpp"
#include "routerisk/gate.hpp"
#include "routerisk/hyperbolic.hpp"
#include "routerisk/temporal.hpp"

namespace routerisk::io {

struct PathConfig {
    std::string scenarios = "out/scenarios.jsonl";
    std::string family_scenarios = "out/family_scenarios.jsonl";
    std::string weights = "out/gate.json";
    std::string labels = "out/gate_labels.csv";
    std::string report_dir = "out/report";

    bool operator==(const PathConfig&) const = default;
};

struct BenchmarkConfig {
    std::vector<bench::Regime> regimes{std::begin(bench::kAllRegimes), std::end(bench::kAllRegimes)};
    std::size_t scenarios_per_regime = 50;
    std::vector<bench::Family> families{std::begin(bench::kAllFamilies), std::end(bench::kAllFamilies)};
    std::size_t family_seeds = 20;
    std::vector<bench::AttackProfile> family_profiles = bench::default_attack_profiles();
    bench::AttackProtocol protocol = bench::AttackProtocol::SeverityLoad;
    std::uint64_t seed = 0;
    bench::RegimeParams regime_params;
    bench::FamilyParams family_params;
    std::vector<std::string> scorers{"native",     "euclidean",      "hyperbolic", "hyperbolic_no_excitation",
                                     "structural", "hand_switching", "learned_gate"};
    std::string eval_split = "eval";  // eval | train | all
    double hand_switch_threshold = 0.05;
    std::size_t threads = 1;

    bool operator==(const BenchmarkConfig&) const = default;
};

struct CascadeRunConfig {
    std::vector<double> branching{2.0};
    std::vector<double> p_grid;  // empty: 0.05, 0.10, ..., 1.00
    std::size_t depth = 6;
    std::size_t trials = 100000;
    std::uint64_t seed = 0;
    double epsilon = 0.05;

    std::vector<double> effective_grid() const;
    bool operator==(const CascadeRunConfig&) const = default;
};

struct LatencyConfig {
    std::size_t calls = 1000;
    std::size_t snapshots = 20;

    bool operator==(const LatencyConfig&) const = default;
};

struct RunConfig {
    PathConfig paths;
    IntensityConfig intensity;
    EuclideanConfig euclidean;
    HyperbolicConfig hyperbolic;
    GateHyperparameters gate;
    BenchmarkConfig benchmark;
    CascadeRunConfig cascade;
    LatencyConfig latency;

    /// Throws Error(InvalidConfig).
    void validate() const;
    bool operator==(const RunConfig&) const = default;
};

nlohmann::json to_json(const RunConfig& c);
/// Missing keys keep their defaults; unknown keys and bad values throw Error(InvalidConfig).
RunConfig config_from_json(const nlohmann::json& j);

RunConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const RunConfig& c);

}  // namespace routerisk::io
