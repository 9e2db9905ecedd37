#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "routerisk/bench/comparators.hpp"
#include "routerisk/bench/evaluate.hpp"
#include "routerisk/bench/generators.hpp"
#include "routerisk/bench/scenario.hpp"
#include "routerisk/bench/stats.hpp"
#include "routerisk/error.hpp"
#include "routerisk/topology.hpp"
#include "support/graphs.hpp"

using namespace routerisk;
using namespace routerisk::bench;

namespace {

GraphSnapshot bare(const Topology& t) {
    Rng rng(0);
    return with_attributes(t, 0.0, {}, rng);
}

bool is_rooted_tree(const Topology& t) {
    if (t.edges.size() + 1 != t.n) return false;
    std::vector<int> indegree(t.n, 0);
    for (auto [u, v] : t.edges) ++indegree[v];
    if (indegree[0] != 0) return false;
    for (std::size_t i = 1; i < t.n; ++i)
        if (indegree[i] != 1) return false;
    return cycle_rank_norm(bare(t)) == 0.0;
}

class ThrowingScorer final : public RouteScorer {
public:
    std::string name() const override { return "throwing"; }
    RouteScore score(const ScoringContext& ctx, const Route&) const override {
        if (ctx.graph.node_count() % 2 == 0) throw Error(ErrorCode::InvalidRoute, "boom");
        return {0.0, {}};
    }
};

}  // namespace

TEST_SUITE("bench") {
    TEST_CASE("random trees are rooted trees within the branching range") {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            Rng rng(seed);
            const auto t = random_tree(20 + seed, 2, 3, rng);
            CHECK(t.n == 20 + seed);
            CHECK(is_rooted_tree(t));
            std::vector<int> children(t.n, 0);
            for (auto [u, v] : t.edges) ++children[u];
            // Every node but the last expanded one has 0, 2 or 3 children.
            int partial = 0;
            for (int c : children) partial += c == 1 ? 1 : 0;
            CHECK(partial <= 1);
            CHECK(*std::max_element(children.begin(), children.end()) <= 3);
        }
    }

    TEST_CASE("preferential attachment yields a tree") {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            Rng rng(seed);
            CHECK(is_rooted_tree(barabasi_albert_tree(7 + seed % 20, rng)));
        }
    }

    TEST_CASE("ring lattice keeps its edge count under rewiring") {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            Rng rng(seed);
            const auto t = watts_strogatz(7, 2, 0.3, rng);
            CHECK(t.edges.size() == 7);
            CHECK_NOTHROW(bare(t));
            for (auto [u, v] : t.edges) CHECK_FALSE(t.has_edge(v, u));
        }
        Rng rng(0);
        CHECK(watts_strogatz(10, 4, 0.0, rng).edges.size() == 20);
    }

    TEST_CASE("random graphs have one direction per linked pair") {
        Rng rng(3);
        const auto t = erdos_renyi(30, 0.4, rng);
        for (auto [u, v] : t.edges) CHECK_FALSE(t.has_edge(v, u));
        auto r = t;
        add_reciprocal_edges(r, 1.0, rng);
        CHECK(r.edges.size() == 2 * t.edges.size());
        CHECK(reciprocal_ratio(bare(r)) == 1.0);
    }

    TEST_CASE("cross edges join unlinked pairs") {
        Rng rng(4);
        auto t = random_tree(30, 2, 3, rng);
        add_cross_edges(t, 9, rng);
        CHECK(t.edges.size() == 29 + 9);
        const auto g = bare(t);
        CHECK(reciprocal_ratio(g) == 0.0);
        CHECK(cycle_rank_raw(g) == doctest::Approx(9.0 / 30.0).epsilon(1e-12));
    }

    TEST_CASE("subtree rewiring keeps a rooted tree") {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            Rng rng(seed);
            auto t = random_tree(40, 2, 3, rng);
            const auto before = t.edges;
            rewire_subtrees(t, 0.2, rng);
            CHECK(is_rooted_tree(t));
            std::size_t moved = 0;
            for (const auto& e : t.edges) moved += std::find(before.begin(), before.end(), e) == before.end();
            CHECK(moved >= 1);
        }
    }

    TEST_CASE("enumerated routes are distinct simple directed paths") {
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            Rng rng(seed);
            const auto g = bare(erdos_renyi(25, 0.2, rng));
            const RouteEnumerationOptions opts;
            const auto routes = enumerate_routes(g, opts, rng);
            CHECK(routes.size() <= opts.count);
            std::set<std::vector<NodeId>> seen;
            for (const auto& r : routes) {
                CHECK(r.size() <= opts.max_length);
                for (std::size_t i = 0; i + 1 < r.size(); ++i) CHECK(g.has_edge(r.nodes()[i], r.nodes()[i + 1]));
                CHECK(seen.insert({r.nodes().begin(), r.nodes().end()}).second);
            }
        }
    }

    TEST_CASE("regime scenarios satisfy their invariants") {
        for (Regime regime : kAllRegimes) {
            const auto scenarios = generate_regime_scenarios(regime, 50);
            REQUIRE(scenarios.size() == 50);
            std::set<std::string> ids;
            for (const auto& s : scenarios) {
                CHECK(ids.insert(s.id).second);
                CHECK(s.attacked_index != s.safe_index);
                CHECK(s.split == split_for_seed(s.seed));
                CHECK(s.group == to_string(regime));
                CHECK(s.snapshot.node_count() >= 20);
                CHECK(s.snapshot.node_count() <= 60);
                CHECK(s.candidate_routes.size() <= 9);
                CHECK(s.candidate_routes.size() >= 2);
                CHECK_FALSE(s.injected_events.empty());
                for (const auto& e : s.injected_events) {
                    CHECK(s.attacked().contains(e.node));
                    CHECK(e.time <= s.time);
                    CHECK(e.time >= s.time - 2.0);
                }
                for (const auto& e : s.background_events) {
                    CHECK_FALSE(s.attacked().contains(e.node));
                    CHECK_FALSE(s.safe().contains(e.node));
                    CHECK(e.severity <= 0.3);
                }
                if (regime == Regime::Noise) CHECK_FALSE(s.background_events.empty());
                if (is_tree_like(regime)) CHECK(cycle_rank_norm(s.snapshot) == 0.0);
                if (regime == Regime::Mixed || regime == Regime::NonTree) CHECK(cycle_rank_norm(s.snapshot) > 0.0);
                if (regime == Regime::NonTree) CHECK(reciprocal_ratio(s.snapshot) > 0.0);
            }
        }
    }

    TEST_CASE("splits are seed-disjoint") {
        const auto scenarios = generate_regime_scenarios(Regime::Clean, 50);
        std::set<std::uint64_t> train;
        std::set<std::uint64_t> eval;
        for (const auto& s : scenarios) (s.split == Split::Train ? train : eval).insert(s.seed);
        for (auto seed : train) CHECK_FALSE(eval.contains(seed));
        CHECK(train == std::set<std::uint64_t>{0, 1, 2, 3, 4});
        CHECK(eval == std::set<std::uint64_t>{5, 6, 7, 8, 9});
    }

    TEST_CASE("churned routes may leave the rewired snapshot's edges") {
        std::size_t broken = 0;
        for (const auto& s : generate_regime_scenarios(Regime::Churn, 50)) {
            for (const auto& r : s.candidate_routes) {
                CHECK_NOTHROW(validate_route(s.snapshot, r));
                for (std::size_t i = 0; i + 1 < r.size(); ++i) broken += !s.snapshot.has_edge(r.nodes()[i], r.nodes()[i + 1]);
            }
        }
        CHECK(broken > 0);
    }

    TEST_CASE("protocols share snapshots and differ in targets") {
        const auto sl = generate_regime_scenarios(Regime::Mixed, 20, 0, AttackProtocol::SeverityLoad);
        const auto lm = generate_regime_scenarios(Regime::Mixed, 20, 0, AttackProtocol::LoadMatched);
        REQUIRE(sl.size() == lm.size());
        for (std::size_t i = 0; i < sl.size(); ++i) {
            CHECK(sl[i].snapshot == lm[i].snapshot);
            CHECK(lm[i].protocol == AttackProtocol::LoadMatched);
            const auto& g = lm[i].snapshot;
            auto mean_load = [&](const Route& r) {
                double s = 0.0;
                for (NodeId v : r.nodes()) s += g.node(v).load;
                return s / static_cast<double>(r.size());
            };
            CHECK(mean_load(lm[i].attacked()) >= mean_load(lm[i].safe()));
        }
    }

    TEST_CASE("load-matched targets are the highest-load nodes") {
        const GraphSnapshot g(0.0, {{0, 0.1, 1.0}, {1, 0.5, 1.0}, {2, 0.3, 1.0}, {3, 0.5, 1.0}, {4, 0.0, 1.0}}, {});
        Rng rng(0);
        const auto t = attack_targets(g, Route({0, 1, 2, 3, 4}), AttackProtocol::LoadMatched, rng);
        CHECK(t == std::vector<NodeId>{1, 3, 2});
    }

    TEST_CASE("severity scaling saturates at one") {
        const auto suite = generate_family_scenarios(Family::BA, 3, default_attack_profiles());
        for (const auto& s : suite) {
            for (const auto& e : s.injected_events) {
                CHECK(e.severity <= 1.0);
                if (s.severity_scale == 0.5) CHECK(e.severity <= 0.425);
            }
        }
    }

    TEST_CASE("names round-trip and unknown names are rejected") {
        for (Regime r : kAllRegimes) CHECK(parse_regime(to_string(r)) == r);
        for (Family f : kAllFamilies) CHECK(parse_family(to_string(f)) == f);
        for (AttackProtocol p : kAllProtocols) CHECK(parse_protocol(to_string(p)) == p);
        CHECK(parse_split("eval") == Split::Eval);
        CHECK_THROWS_AS(parse_regime("forest"), Error);
        CHECK_THROWS_AS(parse_protocol("severity"), Error);
    }

    TEST_CASE("aggregates equal a recomputation from rows") {
        const auto scenarios = generate_regime_scenarios(Regime::Noise, 20);
        const auto result = evaluate(NativeScorer{}, scenarios);
        std::size_t wins = 0;
        double margin = 0.0;
        for (const auto& row : result.rows) {
            CHECK(row.win == (row.margin > 0.0));
            CHECK(row.margin == row.score_safe - row.score_attacked);
            wins += row.win;
            margin += row.margin;
        }
        CHECK(result.overall.win_rate == static_cast<double>(wins) / 20.0);
        CHECK(result.overall.mean_margin == doctest::Approx(margin / 20.0).epsilon(1e-12));
        const auto again = aggregate_groups(result.rows);
        REQUIRE(again.size() == 1);
        CHECK(again[0].win_rate == result.group("noise")->win_rate);
    }

    TEST_CASE("scorer failures are flagged and excluded") {
        std::vector<Scenario> scenarios;
        for (auto s : generate_regime_scenarios(Regime::Clean, 30)) scenarios.push_back(std::move(s));
        const auto result = evaluate(ThrowingScorer{}, scenarios);
        std::size_t even = 0;
        for (const auto& s : scenarios) even += s.snapshot.node_count() % 2 == 0;
        CHECK(result.flagged.size() == even);
        CHECK(result.rows.size() + result.flagged.size() == scenarios.size());
        CHECK(result.overall.count == result.rows.size());
    }

    TEST_CASE("rows record the shared state hash") {
        const auto scenarios = generate_regime_scenarios(Regime::Noise, 5);
        const auto result = evaluate(NativeScorer{}, scenarios);
        for (std::size_t i = 0; i < scenarios.size(); ++i) CHECK(result.rows[i].state_hash == scenario_state_hash(scenarios[i]));
    }

    TEST_CASE("threaded evaluation matches serial evaluation") {
        const auto scenarios = generate_regime_scenarios(Regime::NonTree, 15);
        const StructuralScorer scorer{IntensityConfig{}};
        const auto serial = evaluate(scorer, scenarios);
        EvaluateOptions opts;
        opts.threads = 4;
        const auto threaded = evaluate(scorer, scenarios, opts);
        REQUIRE(serial.rows.size() == threaded.rows.size());
        for (std::size_t i = 0; i < serial.rows.size(); ++i) CHECK(serial.rows[i].margin == threaded.rows[i].margin);
        CHECK(serial.overall.margin_ci == threaded.overall.margin_ci);
    }

    TEST_CASE("paired sign test counts discordant wins") {
        const auto scenarios = generate_regime_scenarios(Regime::Clean, 10);
        const auto oracle = evaluate(OracleScorer(scenarios), scenarios);
        const auto constant = evaluate(ConstantScorer{}, scenarios);
        const auto test = paired_sign_test(oracle, constant);
        CHECK(test.p_value == doctest::Approx(exact_sign_test(10, 0).p_value).epsilon(1e-12));
        CHECK(paired_sign_test(oracle, oracle).flagged);
    }

    TEST_CASE("gate records follow the label rule") {
        const auto scenarios = generate_regime_scenarios(Regime::Mixed, 6);
        auto cache = std::make_shared<EmbeddingCache>();
        const HyperbolicScorer hyp({}, {}, cache);
        const EuclideanScorer euc({}, {});
        const auto records = build_gate_records(scenarios, hyp, euc);
        REQUIRE(records.size() == 2 * scenarios.size());
        for (std::size_t i = 0; i < scenarios.size(); ++i) {
            const auto& a = records[2 * i];
            const auto& b = records[2 * i + 1];
            CHECK(a.scenario_id == scenarios[i].id);
            CHECK(a.attacked_route != b.attacked_route);
            CHECK(a.example.label == b.example.label);
            CHECK(a.example.label == (a.example.margin_hyp >= a.example.margin_euc ? 1 : 0));
            const auto events = scenarios[i].events();
            const ScoringContext ctx{scenarios[i].snapshot, events, scenarios[i].time, std::nullopt};
            const double mh = hyp.score(ctx, scenarios[i].safe()).value - hyp.score(ctx, scenarios[i].attacked()).value;
            CHECK(a.example.margin_hyp == mh);
        }
        CHECK(examples_of(records, Split::Train).size() + examples_of(records, Split::Eval).size() == records.size());
    }

    TEST_CASE("midranks and correlation preconditions") {
        const std::vector<double> xs{3.0, 1.0, 3.0, 2.0};
        CHECK(midranks(xs) == std::vector<double>{3.5, 1.0, 3.5, 2.0});
        const std::vector<double> two{1.0, 2.0};
        CHECK_THROWS_AS(correlations(two, two), Error);
        const std::vector<double> a{1.0, 2.0, 3.0};
        const std::vector<double> flat{2.0, 2.0, 2.0};
        const auto c = correlations(a, flat);
        CHECK_FALSE(c.defined);
        CHECK(std::isnan(c.pearson));
        CHECK(std::isnan(c.spearman));
        const std::vector<double> b{1.0, 2.0, 3.0, 4.0};
        CHECK_THROWS_AS(correlations(a, b), Error);
    }

    TEST_CASE("sign test is symmetric and bounded") {
        for (std::size_t a = 0; a < 30; ++a) {
            for (std::size_t b = 0; b < 30; ++b) {
                if (a + b == 0) continue;
                const double p = exact_sign_test(a, b).p_value;
                CHECK(p == doctest::Approx(exact_sign_test(b, a).p_value).epsilon(1e-12));
                CHECK(p > 0.0);
                CHECK(p <= 1.0);
            }
        }
    }

    TEST_CASE("bootstrap interval brackets the sample mean") {
        const std::vector<double> xs{0.1, 0.5, 0.2, 0.9, 0.4, 0.3, 0.7};
        const auto ci = bootstrap_ci(xs, 400, 95.0, 1);
        CHECK(ci.lo <= mean(xs));
        CHECK(ci.hi >= mean(xs));
        CHECK_THROWS_AS(bootstrap_ci(std::span<const double>{}), Error);
    }
}
