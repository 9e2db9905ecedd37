#pragma once

// Benchmark scenarios: one snapshot, its candidate routes, an attacked/safe
// pair and the failure events shown to every scorer.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "routerisk/bench/generators.hpp"
#include "routerisk/graph.hpp"

namespace routerisk::bench {

enum class Regime { Clean, Noise, Churn, Mixed, NonTree };
enum class Family { BA, WS, ER };
enum class Split { Train, Eval };
enum class AttackProtocol { SeverityLoad, LoadMatched, Random };

inline constexpr Regime kAllRegimes[] = {Regime::Clean, Regime::Noise, Regime::Churn, Regime::Mixed, Regime::NonTree};
inline constexpr Family kAllFamilies[] = {Family::BA, Family::WS, Family::ER};
inline constexpr AttackProtocol kAllProtocols[] = {AttackProtocol::SeverityLoad, AttackProtocol::LoadMatched,
                                                   AttackProtocol::Random};

std::string_view to_string(Regime r) noexcept;
std::string_view to_string(Family f) noexcept;
std::string_view to_string(Split s) noexcept;
std::string_view to_string(AttackProtocol p) noexcept;
/// Throw Error(InvalidConfig) on unknown names.
Regime parse_regime(std::string_view s);
Family parse_family(std::string_view s);
Split parse_split(std::string_view s);
AttackProtocol parse_protocol(std::string_view s);

/// Trees without cross links: the regimes where hyperbolic structure is exact.
bool is_tree_like(Regime r) noexcept;

/// Seeds 0-4 of every block of ten train, 5-9 evaluate.
inline Split split_for_seed(std::uint64_t seed) noexcept { return seed % 10 < 5 ? Split::Train : Split::Eval; }

inline constexpr double kAttackSeverities[3] = {0.85, 0.73, 0.61};

struct Scenario {
    std::string id;
    std::string group;  // regime or family name
    std::uint64_t seed = 0;
    Split split = Split::Train;
    AttackProtocol protocol = AttackProtocol::SeverityLoad;
    double severity_scale = 1.0;
    double time = 10.0;  // scoring time t
    GraphSnapshot snapshot;
    std::vector<Route> candidate_routes;
    std::size_t attacked_index = 0;
    std::size_t safe_index = 1;
    std::vector<FailureEvent> injected_events;    // only on attacked-route nodes
    std::vector<FailureEvent> background_events;  // only off both paired routes

    const Route& attacked() const { return candidate_routes.at(attacked_index); }
    const Route& safe() const { return candidate_routes.at(safe_index); }
    /// Background then injected events: the history every scorer sees.
    std::vector<FailureEvent> events() const;

    bool operator==(const Scenario&) const = default;
};

/// Generator settings for the five regimes; defaults are the benchmark's.
struct RegimeParams {
    std::size_t min_nodes = 20;
    std::size_t max_nodes = 60;
    std::size_t min_branch = 2;
    std::size_t max_branch = 3;
    AttributeRanges attributes;
    RouteEnumerationOptions routes;
    std::size_t scenarios_per_seed = 5;
    std::size_t pairs_per_snapshot = 4;
    std::size_t background_events = 5;
    double background_severity_max = 0.3;
    double churn_fraction = 0.2;
    double cross_edge_fraction = 0.3;
    double dense_edge_probability = 0.35;
    double reciprocal_fraction = 0.5;
    double time = 10.0;
    double attack_window = 2.0;

    bool operator==(const RegimeParams&) const = default;
};

struct FamilyParams {
    std::size_t nodes = 7;
    std::size_t ws_k = 2;
    double ws_beta = 0.3;
    double er_p = 0.5;
    AttributeRanges attributes;
    RouteEnumerationOptions routes;
    double time = 10.0;
    double attack_window = 2.0;

    bool operator==(const FamilyParams&) const = default;
};

/// Attack profile of the family suite: a protocol and a severity multiplier.
struct AttackProfile {
    AttackProtocol protocol = AttackProtocol::SeverityLoad;
    double severity_scale = 1.0;

    bool operator==(const AttackProfile&) const = default;
};

/// severity_load, load_matched, random, severity_load x0.5, severity_load x1.5.
std::vector<AttackProfile> default_attack_profiles();

/// Topology for one family draw.
Topology family_topology(Family f, const FamilyParams& params, Rng& rng);

/// `n_scenarios` scenarios; scenario seeds run 0, 1, 2, ... with
/// `scenarios_per_seed` scenarios each, all derived from `base_seed`.
/// Deterministic per (regime, n, base_seed, protocol, params).
std::vector<Scenario> generate_regime_scenarios(Regime regime, std::size_t n_scenarios, std::uint64_t base_seed = 0,
                                                AttackProtocol protocol = AttackProtocol::SeverityLoad,
                                                const RegimeParams& params = {});

/// seed_count x profiles scenarios; every profile of a seed shares the snapshot and routes.
std::vector<Scenario> generate_family_scenarios(Family family, std::size_t seed_count,
                                                std::span<const AttackProfile> profiles, std::uint64_t base_seed = 0,
                                                const FamilyParams& params = {});

/// Target nodes for `protocol`, in the order severities are assigned.
std::vector<NodeId> attack_targets(const GraphSnapshot& g, const Route& attacked, AttackProtocol protocol, Rng& rng);

/// Replaces the scenario's injected events. load_matched first makes the
/// paired route with the higher mean load the attacked one.
Scenario inject_attack(Scenario s, AttackProtocol protocol, std::uint64_t seed, double attack_window = 2.0);

/// Even-indexed routes attacked, odd-indexed safe, in enumeration order.
/// Throws Error(DegenerateScenario) with fewer than two routes.
std::vector<std::pair<std::size_t, std::size_t>> pair_routes(std::span<const Route> routes);
std::pair<Route, Route> pair_routes(const Scenario& s);

}  // namespace routerisk::bench
