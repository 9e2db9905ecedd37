#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "routerisk/error.hpp"
#include "routerisk/hyperbolic.hpp"
#include "support/graphs.hpp"

using namespace routerisk;
using routerisk::testing::chain;
using routerisk::testing::make_graph;

namespace {

double embedded_distance(const HyperbolicEmbedding& e, NodeId a, NodeId b) {
    return geodesic_distance(e.coord(*e.index_of(a)), e.coord(*e.index_of(b)), e.curvature);
}

}  // namespace

TEST_SUITE("examples/hyperbolic") {
    TEST_CASE("distance from a point to itself is zero") {
        const std::array<double, 2> z{0.3, -0.2};
        CHECK(geodesic_distance(z, z, 1.0) == 0.0);
        CHECK(geodesic_distance(z, z, 2.5) == 0.0);
    }

    TEST_CASE("distance is symmetric") {
        const std::array<double, 2> a{0.3, -0.2};
        const std::array<double, 2> b{-0.1, 0.6};
        CHECK(geodesic_distance(a, b, 1.0) == geodesic_distance(b, a, 1.0));
        CHECK(geodesic_distance(a, b, 0.7) == geodesic_distance(b, a, 0.7));
    }

    TEST_CASE("radial geodesic from the origin") {
        const std::array<double, 2> o{0.0, 0.0};
        const std::array<double, 2> z{0.3, 0.4};
        const double oracle = 2.0 * std::atanh(0.5);
        CHECK(geodesic_distance(o, z, 1.0) == doctest::Approx(oracle).epsilon(1e-12));
        CHECK(oracle == doctest::Approx(1.0986).epsilon(1e-4));
        const std::array<double, 2> outside{0.8, 0.8};
        CHECK_THROWS_AS(geodesic_distance(o, outside, 1.0), Error);
    }

    TEST_CASE("single node embeds at the origin with zero stress") {
        const auto g = make_graph(1, {});
        const auto e = embed(g, 1.0, {});
        REQUIRE(e.nodes.size() == 1);
        CHECK(e.coord(0)[0] == 0.0);
        CHECK(e.coord(0)[1] == 0.0);
        CHECK(e.final_stress == 0.0);
    }

    TEST_CASE("two adjacent nodes end up one unit apart") {
        const auto g = make_graph(2, {{0, 1}});
        const auto e = embed(g, 1.0, {});
        CHECK(std::abs(embedded_distance(e, 0, 1) - 1.0) <= 0.05);
    }

    TEST_CASE("star leaves are equidistant") {
        // Four mutually equidistant points need a third dimension.
        const auto g = make_graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
        EmbeddingOptions opts;
        opts.iterations = 1000;
        opts.dimension = 3;
        const auto e = embed(g, 1.0, opts);
        std::vector<double> d;
        for (NodeId a = 1; a <= 4; ++a)
            for (NodeId b = a + 1; b <= 4; ++b) d.push_back(embedded_distance(e, a, b));
        double mean = 0.0;
        for (double x : d) mean += x;
        mean /= static_cast<double>(d.size());
        for (double x : d) CHECK(std::abs(x - mean) <= 0.10 * mean);
    }

    TEST_CASE("planar star layout is a square") {
        const auto g = make_graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
        EmbeddingOptions opts;
        opts.iterations = 1000;
        const auto e = embed(g, 1.0, opts);
        std::vector<double> d;
        for (NodeId a = 1; a <= 4; ++a)
            for (NodeId b = a + 1; b <= 4; ++b) d.push_back(embedded_distance(e, a, b));
        std::sort(d.begin(), d.end());
        for (std::size_t i = 1; i < 4; ++i) CHECK(std::abs(d[i] - d[0]) <= 0.10 * d[0]);
        CHECK(std::abs(d[5] - d[4]) <= 0.10 * d[4]);
        CHECK(d[4] > d[3]);
    }

    TEST_CASE("golden section on a quadratic surrogate") {
        const auto r = golden_section_minimize([](double k) { return (k - 2.0) * (k - 2.0); }, 0.10, 4.50, 1e-3, 40);
        CHECK(std::abs(r.argmin - 2.0) <= 1e-3);
        CHECK(r.evaluations <= 40);
    }

    TEST_CASE("fitted curvature stays in the bracket") {
        std::mt19937_64 rng(7);
        for (int i = 0; i < 5; ++i) {
            const auto g = routerisk::testing::random_digraph(8, 0.3, rng);
            const auto fit = fit_curvature(g, {});
            CHECK(fit.kappa >= 0.10);
            CHECK(fit.kappa <= 4.50);
        }
    }

    TEST_CASE("fitted stress is no worse than either bracket endpoint") {
        std::mt19937_64 rng(0);
        std::vector<DirectedEdge> dense;
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        for (NodeId i = 0; i < 8; ++i)
            for (NodeId j = i + 1; j < 8; ++j)
                if (u01(rng) < 0.8) dense.push_back({i, j, 1.0});
        std::vector<NodeAttributes> nodes;
        for (NodeId i = 0; i < 8; ++i) nodes.push_back({i, 0.0, 1.0});
        const GraphSnapshot er(0.0, nodes, dense);
        const HyperbolicConfig cfg;
        for (const auto& g : {chain(8), er}) {
            const auto fit = fit_curvature(g, cfg);
            CHECK(fit.kappa >= cfg.kappa_min);
            CHECK(fit.kappa <= cfg.kappa_max);
            CHECK(fit.embedding.final_stress <= embed(g, cfg.kappa_min, cfg.embedding).final_stress);
            CHECK(fit.embedding.final_stress <= embed(g, cfg.kappa_max, cfg.embedding).final_stress);
        }
    }

    TEST_CASE("without events or load only compactness and decoder remain") {
        const auto g = chain(5);
        const HyperbolicConfig cfg;
        const auto fit = fit_curvature(g, cfg);
        const ScoringContext ctx{g, {}, 10.0, std::nullopt};
        const auto s = route_score_hyperbolic(ctx, Route({1, 2, 3}), IntensityConfig{}, cfg, fit);
        CHECK(s.term("tail") == 0.0);
        CHECK(s.term("frontier") == 0.0);
        CHECK(s.value == doctest::Approx(s.term("compactness") + s.term("decoder")).epsilon(1e-12));
        CHECK(s.value > 0.0);
    }

    TEST_CASE("an attacked route scores below a clean one of the same shape") {
        const auto g = make_graph(5, {{0, 1}, {1, 2}, {0, 3}, {3, 4}}, 0.1);
        const HyperbolicConfig cfg;
        const auto fit = fit_curvature(g, cfg);
        const std::vector<FailureEvent> events{{10.0, 2, 0.85, "failure", std::nullopt}};
        const ScoringContext ctx{g, events, 10.0, std::nullopt};
        const auto attacked = route_score_hyperbolic(ctx, Route({1, 2}), IntensityConfig{}, cfg, fit);
        const auto clean = route_score_hyperbolic(ctx, Route({3, 4}), IntensityConfig{}, cfg, fit);
        CHECK(clean.value > attacked.value);
    }

    TEST_CASE("single-node route scores two minus its load") {
        std::vector<NodeAttributes> nodes{{0, 0.0, 1.0}, {1, 0.35, 1.0}, {2, 0.1, 1.0}};
        const GraphSnapshot g(0.0, nodes, {{0, 1, 1.0}, {1, 2, 1.0}});
        const HyperbolicConfig cfg;
        const auto fit = fit_curvature(g, cfg);
        const ScoringContext ctx{g, {}, 10.0, std::nullopt};
        const auto s = route_score_hyperbolic(ctx, Route({1}), IntensityConfig{}, cfg, fit);
        CHECK(s.term("compactness") == 1.0);
        CHECK(s.term("decoder") == 1.0);
        CHECK(s.term("bottleneck") == 0.35);
        CHECK(s.value == doctest::Approx(2.0 - 0.35).epsilon(1e-12));
    }
}
