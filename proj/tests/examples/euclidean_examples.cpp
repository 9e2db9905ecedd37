#include <doctest.h>

#include <map>
#include <vector>

#include "routerisk/euclidean.hpp"
#include "routerisk/error.hpp"
#include "support/graphs.hpp"

using namespace routerisk;
using routerisk::testing::chain;
using routerisk::testing::make_graph;

TEST_SUITE("examples/euclidean") {
    TEST_CASE("zero intensities give a zero state") {
        const auto g = chain(3);
        const auto s = init_state(g, {{0, 0.0}, {1, 0.0}, {2, 0.0}});
        CHECK(s.step == 0);
        for (double x : s.risk) CHECK(x == 0.0);
    }

    TEST_CASE("single node state copies its intensity") {
        const auto g = make_graph(1, {});
        const auto s = init_state(g, {{0, 0.85}});
        CHECK(s.at(0) == 0.85);
    }

    TEST_CASE("initial state is a componentwise copy") {
        const auto g = chain(3);
        const std::map<NodeId, double> lam{{0, 0.1}, {1, 0.2}, {2, 0.3}};
        const auto s = init_state(g, lam);
        for (const auto& [v, x] : lam) CHECK(s.at(v) == x);
        CHECK_THROWS_AS(init_state(g, {{0, 0.1}}), Error);
    }

    TEST_CASE("edgeless graph without recovery is a fixed point") {
        const auto g = make_graph(3, {});
        EuclideanConfig cfg;
        cfg.recovery_base = 0.0;
        const auto s0 = init_state(g, {{0, 0.4}, {1, 0.0}, {2, 1.7}});
        const auto s1 = propagate_step(s0, g, cfg);
        CHECK(s1.risk == s0.risk);
        CHECK(s1.step == 1);
    }

    TEST_CASE("unit diffusion along one edge") {
        // load(u) = 1 makes eta = strength * reliability and rho_u = 0.
        std::vector<NodeAttributes> nodes{{0, 0.0, 1.0}, {1, 1.0, 1.0}};
        const GraphSnapshot g(0.0, nodes, {{0, 1, 1.0}});
        EuclideanConfig cfg;
        cfg.recovery_base = 0.0;
        cfg.diffusion_strength = 1.0;
        const auto s1 = propagate_step(init_state(g, {{0, 1.0}, {1, 0.0}}), g, cfg);
        CHECK(s1.at(0) == 1.0);
        CHECK(s1.at(1) == 1.0);
    }

    TEST_CASE("two synchronous steps along a chain") {
        // zero load: eta = 1.0 * 1.0 * 0.5 = 0.5
        const auto g = chain(3);
        EuclideanConfig cfg;
        cfg.recovery_base = 0.0;
        cfg.diffusion_strength = 1.0;
        const auto s0 = init_state(g, {{0, 1.0}, {1, 0.0}, {2, 0.0}});
        const auto s1 = propagate_step(s0, g, cfg);
        CHECK(s1.risk == std::vector<double>{1.0, 0.5, 0.0});
        const auto s2 = propagate_step(s1, g, cfg);
        CHECK(s2.risk == std::vector<double>{1.0, 1.0, 0.25});
    }

    TEST_CASE("no events, no latency, no load scores zero") {
        const auto g = chain(4);
        const ScoringContext ctx{g, {}, 10.0, std::nullopt};
        const auto s = route_score_euclidean(ctx, Route({0, 1, 2, 3}), IntensityConfig{}, EuclideanConfig{});
        CHECK(s.value == 0.0);
    }

    TEST_CASE("an injected event on the last node lowers the score") {
        const auto g = make_graph(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}}, 0.2, 0.9);
        const std::vector<FailureEvent> events{{10.0, 2, 0.85, "failure", std::nullopt}};
        const ScoringContext ctx{g, events, 10.0, std::nullopt};
        const auto a = route_score_euclidean(ctx, Route({0, 1, 2}), IntensityConfig{}, EuclideanConfig{});
        const auto b = route_score_euclidean(ctx, Route({3, 4, 5}), IntensityConfig{}, EuclideanConfig{});
        CHECK(b.value > a.value);
    }

    TEST_CASE("infected mass of a two-node route with one event") {
        const auto g = make_graph(2, {});
        const std::vector<FailureEvent> events{{10.0, 0, 0.85, "failure", std::nullopt}};
        const ScoringContext ctx{g, events, 10.0, std::nullopt};
        EuclideanConfig cfg;
        cfg.steps = 1;
        cfg.recovery_base = 0.0;
        cfg.weights = {1.0, 0.0, 0.0, 0.0, 0.0};
        const auto s = route_score_euclidean(ctx, Route({0, 1}), IntensityConfig{}, cfg);
        CHECK(s.value == doctest::Approx(-0.425).epsilon(1e-12));
        CHECK(s.term("infected_mass") == doctest::Approx(0.425).epsilon(1e-12));
    }
}
