#include "routerisk/bench/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hashing.hpp"
#include "routerisk/error.hpp"

namespace routerisk::bench {

namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view s, const E (&all)[N], std::string_view what) {
    for (E e : all) {
        if (to_string(e) == s) return e;
    }
    throw Error(ErrorCode::InvalidConfig, "unknown " + std::string(what) + " '" + std::string(s) + "'");
}

double uniform(double lo, double hi, Rng& rng) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

double mean_load(const GraphSnapshot& g, const Route& r) {
    double s = 0.0;
    for (NodeId v : r.nodes()) s += g.node(v).load;
    return s / static_cast<double>(r.size());
}

// Stream ids keep regime and family draws apart for the same seed.
constexpr std::uint64_t kRegimeStream = 0x100;
constexpr std::uint64_t kFamilyStream = 0x200;

}  // namespace

std::string_view to_string(Regime r) noexcept {
    switch (r) {
        case Regime::Clean: return "clean";
        case Regime::Noise: return "noise";
        case Regime::Churn: return "churn";
        case Regime::Mixed: return "mixed";
        case Regime::NonTree: return "non_tree";
    }
    return "unknown";
}

std::string_view to_string(Family f) noexcept {
    switch (f) {
        case Family::BA: return "BA";
        case Family::WS: return "WS";
        case Family::ER: return "ER";
    }
    return "unknown";
}

std::string_view to_string(Split s) noexcept { return s == Split::Train ? "train" : "eval"; }

std::string_view to_string(AttackProtocol p) noexcept {
    switch (p) {
        case AttackProtocol::SeverityLoad: return "severity_load";
        case AttackProtocol::LoadMatched: return "load_matched";
        case AttackProtocol::Random: return "random";
    }
    return "unknown";
}

Regime parse_regime(std::string_view s) { return parse_enum(s, kAllRegimes, "regime"); }
Family parse_family(std::string_view s) { return parse_enum(s, kAllFamilies, "family"); }
AttackProtocol parse_protocol(std::string_view s) { return parse_enum(s, kAllProtocols, "attack protocol"); }
Split parse_split(std::string_view s) {
    constexpr Split all[] = {Split::Train, Split::Eval};
    return parse_enum(s, all, "split");
}

bool is_tree_like(Regime r) noexcept { return r == Regime::Clean || r == Regime::Noise || r == Regime::Churn; }

std::vector<FailureEvent> Scenario::events() const {
    std::vector<FailureEvent> all = background_events;
    all.insert(all.end(), injected_events.begin(), injected_events.end());
    return all;
}

std::vector<AttackProfile> default_attack_profiles() {
    return {{AttackProtocol::SeverityLoad, 1.0},
            {AttackProtocol::LoadMatched, 1.0},
            {AttackProtocol::Random, 1.0},
            {AttackProtocol::SeverityLoad, 0.5},
            {AttackProtocol::SeverityLoad, 1.5}};
}

std::vector<std::pair<std::size_t, std::size_t>> pair_routes(std::span<const Route> routes) {
    if (routes.size() < 2) throw Error(ErrorCode::DegenerateScenario, "fewer than two candidate routes");
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i + 1 < routes.size(); i += 2) pairs.emplace_back(i, i + 1);
    return pairs;
}

std::pair<Route, Route> pair_routes(const Scenario& s) {
    if (s.candidate_routes.size() < 2) throw Error(ErrorCode::DegenerateScenario, "fewer than two candidate routes");
    return {s.attacked(), s.safe()};
}

std::vector<NodeId> attack_targets(const GraphSnapshot& g, const Route& attacked, AttackProtocol protocol, Rng& rng) {
    const auto nodes = attacked.nodes();
    const std::size_t k = std::min<std::size_t>(3, nodes.size());
    std::vector<std::size_t> positions(nodes.size());
    std::iota(positions.begin(), positions.end(), 0);
    switch (protocol) {
        case AttackProtocol::SeverityLoad:
            positions.erase(positions.begin(), positions.end() - static_cast<std::ptrdiff_t>(k));
            break;
        case AttackProtocol::LoadMatched:
            std::stable_sort(positions.begin(), positions.end(), [&](std::size_t a, std::size_t b) {
                return g.node(nodes[a]).load > g.node(nodes[b]).load;
            });
            positions.resize(k);
            break;
        case AttackProtocol::Random:
            std::shuffle(positions.begin(), positions.end(), rng);
            positions.resize(k);
            break;
    }
    std::vector<NodeId> targets;
    for (std::size_t p : positions) targets.push_back(nodes[p]);
    return targets;
}

Scenario inject_attack(Scenario s, AttackProtocol protocol, std::uint64_t seed, double attack_window) {
    if (s.candidate_routes.size() < 2) throw Error(ErrorCode::DegenerateScenario, "fewer than two candidate routes");
    s.protocol = protocol;
    if (protocol == AttackProtocol::LoadMatched &&
        mean_load(s.snapshot, s.safe()) > mean_load(s.snapshot, s.attacked())) {
        std::swap(s.attacked_index, s.safe_index);
    }
    Rng rng(seed);
    const auto targets = attack_targets(s.snapshot, s.attacked(), protocol, rng);
    s.injected_events.clear();
    for (std::size_t i = 0; i < targets.size(); ++i) {
        FailureEvent e;
        e.time = uniform(s.time - attack_window, s.time, rng);
        e.node = targets[i];
        e.severity = std::min(1.0, kAttackSeverities[i] * s.severity_scale);
        s.injected_events.push_back(e);
    }
    return s;
}

namespace {

// One regime snapshot plus its candidate routes; churn rewires after enumeration.
std::pair<GraphSnapshot, std::vector<Route>> regime_snapshot(Regime regime, const RegimeParams& p, Rng& rng) {
    const auto n = std::uniform_int_distribution<std::size_t>(p.min_nodes, p.max_nodes)(rng);
    Topology topo;
    switch (regime) {
        case Regime::Clean:
        case Regime::Noise:
        case Regime::Churn:
            topo = random_tree(n, p.min_branch, p.max_branch, rng);
            break;
        case Regime::Mixed:
            topo = random_tree(n, p.min_branch, p.max_branch, rng);
            add_cross_edges(topo,
                            static_cast<std::size_t>(std::llround(p.cross_edge_fraction * static_cast<double>(n - 1))),
                            rng);
            break;
        case Regime::NonTree:
            topo = erdos_renyi(n, p.dense_edge_probability, rng);
            add_reciprocal_edges(topo, p.reciprocal_fraction, rng);
            break;
    }
    const std::uint64_t attribute_seed = rng();
    Rng attr_rng(attribute_seed);
    GraphSnapshot g = with_attributes(topo, p.time, p.attributes, attr_rng);
    auto routes = enumerate_routes(g, p.routes, rng);
    if (regime == Regime::Churn) {
        rewire_subtrees(topo, p.churn_fraction, rng);
        // Same attribute stream: node attributes survive the rewiring.
        Rng again(attribute_seed);
        g = with_attributes(topo, p.time, p.attributes, again);
    }
    return {std::move(g), std::move(routes)};
}

std::vector<FailureEvent> background_events(const GraphSnapshot& g, const Route& a, const Route& b,
                                            const RegimeParams& p, Rng& rng) {
    std::vector<NodeId> off_route;
    for (const auto& node : g.nodes()) {
        if (!a.contains(node.id) && !b.contains(node.id)) off_route.push_back(node.id);
    }
    std::vector<FailureEvent> events;
    if (off_route.empty()) return events;
    for (std::size_t i = 0; i < p.background_events; ++i) {
        FailureEvent e;
        e.node = off_route[std::uniform_int_distribution<std::size_t>(0, off_route.size() - 1)(rng)];
        e.severity = uniform(0.0, p.background_severity_max, rng);
        e.time = uniform(0.0, p.time, rng);
        e.category = "background";
        events.push_back(e);
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const FailureEvent& x, const FailureEvent& y) { return x.time < y.time; });
    return events;
}

}  // namespace

std::vector<Scenario> generate_regime_scenarios(Regime regime, std::size_t n_scenarios, std::uint64_t base_seed,
                                                AttackProtocol protocol, const RegimeParams& params) {
    if (n_scenarios == 0) throw Error(ErrorCode::InvalidConfig, "n_scenarios must be >= 1");
    if (params.scenarios_per_seed == 0 || params.pairs_per_snapshot == 0)
        throw Error(ErrorCode::InvalidConfig, "scenarios_per_seed and pairs_per_snapshot must be >= 1");
    const std::uint64_t regime_seed = detail::derive_seed(base_seed, kRegimeStream + static_cast<std::uint64_t>(regime));
    std::vector<Scenario> out;
    for (std::uint64_t seed = 0; out.size() < n_scenarios; ++seed) {
        Rng rng(detail::derive_seed(regime_seed, seed));
        std::size_t made = 0;
        for (std::size_t snap = 0; made < params.scenarios_per_seed && out.size() < n_scenarios; ++snap) {
            if (snap >= 64) throw Error(ErrorCode::DegenerateScenario, "regime generator cannot produce route pairs");
            auto [g, routes] = regime_snapshot(regime, params, rng);
            if (routes.size() < 2) continue;
            const auto pairs = pair_routes(routes);
            for (std::size_t k = 0; k < pairs.size() && k < params.pairs_per_snapshot &&
                                    made < params.scenarios_per_seed && out.size() < n_scenarios;
                 ++k) {
                Scenario s;
                s.id = std::string(to_string(regime)) + "-s" + std::to_string(seed) + "-g" + std::to_string(snap) +
                       "-p" + std::to_string(k);
                s.group = std::string(to_string(regime));
                s.seed = seed;
                s.split = split_for_seed(seed);
                s.time = params.time;
                s.snapshot = g;
                s.candidate_routes = routes;
                s.attacked_index = pairs[k].first;
                s.safe_index = pairs[k].second;
                if (regime == Regime::Noise) s.background_events = background_events(g, s.attacked(), s.safe(), params, rng);
                out.push_back(inject_attack(std::move(s), protocol, rng(), params.attack_window));
                ++made;
            }
        }
    }
    return out;
}

Topology family_topology(Family f, const FamilyParams& params, Rng& rng) {
    switch (f) {
        case Family::BA: return barabasi_albert_tree(params.nodes, rng);
        case Family::WS: return watts_strogatz(params.nodes, params.ws_k, params.ws_beta, rng);
        case Family::ER: return erdos_renyi(params.nodes, params.er_p, rng);
    }
    throw Error(ErrorCode::InvalidConfig, "unknown family");
}

std::vector<Scenario> generate_family_scenarios(Family family, std::size_t seed_count,
                                                std::span<const AttackProfile> profiles, std::uint64_t base_seed,
                                                const FamilyParams& params) {
    const std::uint64_t family_seed = detail::derive_seed(base_seed, kFamilyStream + static_cast<std::uint64_t>(family));
    std::vector<Scenario> out;
    for (std::uint64_t seed = 0; seed < seed_count; ++seed) {
        Rng rng(detail::derive_seed(family_seed, seed));
        GraphSnapshot g;
        std::vector<Route> routes;
        for (std::size_t attempt = 0; routes.size() < 2; ++attempt) {
            if (attempt >= 64) throw Error(ErrorCode::DegenerateScenario, "family generator cannot produce route pairs");
            const Topology topo = family_topology(family, params, rng);
            g = with_attributes(topo, params.time, params.attributes, rng);
            routes = enumerate_routes(g, params.routes, rng);
        }
        const std::uint64_t attack_seed = rng();
        for (std::size_t k = 0; k < profiles.size(); ++k) {
            Scenario s;
            s.id = std::string(to_string(family)) + "-s" + std::to_string(seed) + "-a" + std::to_string(k);
            s.group = std::string(to_string(family));
            s.seed = seed;
            s.split = split_for_seed(seed);
            s.severity_scale = profiles[k].severity_scale;
            s.time = params.time;
            s.snapshot = g;
            s.candidate_routes = routes;
            s.attacked_index = 0;
            s.safe_index = 1;
            out.push_back(inject_attack(std::move(s), profiles[k].protocol, detail::derive_seed(attack_seed, k),
                                        params.attack_window));
        }
    }
    return out;
}

}  // namespace routerisk::bench
