#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include "routerisk/error.hpp"
#include "routerisk/hyperbolic.hpp"
#include "support/graphs.hpp"

using namespace routerisk;
using namespace routerisk::testing;

namespace {

std::array<double, 2> random_point(std::mt19937_64& rng, double kappa) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double radius = 0.95 / std::sqrt(kappa);
    while (true) {
        std::array<double, 2> z{u(rng) * radius, u(rng) * radius};
        if (z[0] * z[0] + z[1] * z[1] < radius * radius) return z;
    }
}

}  // namespace

TEST_SUITE("hyperbolic") {
    TEST_CASE("triangle inequality on sampled triples") {
        std::mt19937_64 rng(1);
        for (int trial = 0; trial < 2000; ++trial) {
            const double kappa = 0.1 + 4.4 * static_cast<double>(trial % 10) / 9.0;
            const auto a = random_point(rng, kappa);
            const auto b = random_point(rng, kappa);
            const auto c = random_point(rng, kappa);
            CHECK(geodesic_distance(a, c, kappa) <=
                  geodesic_distance(a, b, kappa) + geodesic_distance(b, c, kappa) + 1e-9);
        }
    }

    TEST_CASE("distance grows as a point moves outward") {
        for (double kappa : {0.1, 1.0, 4.5}) {
            const std::array<double, 2> fixed{0.1 / std::sqrt(kappa), -0.2 / std::sqrt(kappa)};
            double prev = -1.0;
            for (double t = 0.3; t < 0.99; t += 0.05) {
                const std::array<double, 2> z{t * 0.6 / std::sqrt(kappa), t * 0.8 / std::sqrt(kappa)};
                const double d = geodesic_distance(fixed, z, kappa);
                CHECK(d > prev);
                prev = d;
            }
        }
    }

    TEST_CASE("radial distance agrees with the distance from the origin") {
        std::mt19937_64 rng(2);
        const std::array<double, 2> origin{0.0, 0.0};
        for (double kappa : {0.3, 1.0, 2.7}) {
            const auto z = random_point(rng, kappa);
            CHECK(radial_distance(z, kappa) == doctest::Approx(geodesic_distance(origin, z, kappa)).epsilon(1e-12));
        }
    }

    TEST_CASE("embedding stress never increases and stays inside the ball") {
        std::mt19937_64 rng(3);
        for (int trial = 0; trial < 20; ++trial) {
            const auto g = random_digraph(6 + trial % 10, 0.25, rng);
            const double kappa = 0.1 + 0.2 * trial;
            const auto e = embed(g, kappa, {});
            CHECK(e.final_stress <= e.initial_stress);
            const double limit = 1.0 / std::sqrt(kappa);
            for (std::size_t i = 0; i < e.nodes.size(); ++i) {
                double n2 = 0.0;
                for (double x : e.coord(i)) n2 += x * x;
                CHECK(std::sqrt(n2) <= 0.999 * limit * (1.0 + 1e-12));
            }
        }
    }

    TEST_CASE("disconnected graphs embed their largest component") {
        const auto g = make_graph(6, {{0, 1}, {1, 2}, {2, 3}, {4, 5}});
        const auto e = embed(g, 1.0, {});
        CHECK(e.partial);
        CHECK(e.embedded[0]);
        CHECK_FALSE(e.embedded[4]);
        CHECK(e.hop(0, 4) == -1);
    }

    TEST_CASE("curvature fitting is deterministic") {
        std::mt19937_64 rng(4);
        const auto g = random_digraph(10, 0.3, rng);
        const auto a = fit_curvature(g, {});
        const auto b = fit_curvature(g, {});
        CHECK(a.kappa == b.kappa);
        CHECK(a.embedding.coords == b.embedding.coords);
        CHECK(a.evaluations <= 40);
    }

    TEST_CASE("degenerate graphs fall back to the lower bracket") {
        const auto fit = fit_curvature(make_graph(1, {}), {});
        CHECK(fit.degenerate);
        CHECK(fit.kappa == 0.10);
    }

    TEST_CASE("golden section respects the evaluation budget") {
        std::size_t calls = 0;
        const auto r = golden_section_minimize(
            [&](double x) {
                ++calls;
                return std::abs(x - 3.3);
            },
            0.1, 4.5, 1e-12, 12);
        CHECK(calls == r.evaluations);
        CHECK(r.evaluations <= 12);
        const auto edge = golden_section_minimize([](double x) { return x; }, 0.1, 4.5, 0.01, 40);
        CHECK(edge.argmin == 0.1);
    }

    TEST_CASE("a more severe event never raises the score") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        const HyperbolicConfig cfg;
        for (int trial = 0; trial < 20; ++trial) {
            const auto g = random_tree_graph(12, rng);
            const auto fit = fit_curvature(g, cfg);
            const Route r = random_walk_route(g, 5, rng);
            std::vector<FailureEvent> events{
                {9.0 * u01(rng), r.nodes()[rng() % r.size()], 0.5 * u01(rng), "failure", std::nullopt},
                {9.0 * u01(rng), static_cast<NodeId>(rng() % 12), u01(rng), "failure", std::nullopt}};
            const ScoringContext before{g, events, 10.0, std::nullopt};
            const double s0 = route_score_hyperbolic(before, r, {}, cfg, fit).value;
            events[0].severity += 0.5 * u01(rng);
            const ScoringContext after{g, events, 10.0, std::nullopt};
            CHECK(route_score_hyperbolic(after, r, {}, cfg, fit).value <= s0 + 1e-12);
        }
    }

    TEST_CASE("excitation toggle scores with the undamped intensity") {
        const auto g = chain(4);
        HyperbolicConfig off;
        off.excitation = false;
        const auto fit = fit_curvature(g, off);
        const std::vector<FailureEvent> events{{9.0, 2, 0.8, "failure", std::nullopt},
                                               {9.5, 2, 0.8, "failure", std::nullopt}};
        const ScoringContext ctx{g, events, 10.0, std::nullopt};
        const auto with = route_score_hyperbolic(ctx, Route({1, 2}), {}, HyperbolicConfig{}, fit);
        const auto without = route_score_hyperbolic(ctx, Route({1, 2}), {}, off, fit);
        CHECK(without.term("frontier") < with.term("frontier"));
        CHECK(HyperbolicScorer({}, off).name() == "hyperbolic_no_excitation");
    }

    TEST_CASE("cache returns one fit per snapshot under concurrency") {
        auto cache = std::make_shared<EmbeddingCache>();
        const auto g = chain(8);
        const HyperbolicConfig cfg;
        std::vector<std::shared_ptr<const CurvatureFit>> got(4);
        std::vector<std::thread> workers;
        for (std::size_t i = 0; i < got.size(); ++i)
            workers.emplace_back([&, i] { got[i] = cache->get_or_fit(g, cfg); });
        for (auto& w : workers) w.join();
        CHECK(cache->size() == 1);
        for (const auto& fit : got) CHECK(fit->kappa == got[0]->kappa);
        CHECK(cache->get_or_fit(g, cfg) == cache->get_or_fit(g, cfg));
    }

    TEST_CASE("routes outside the snapshot are rejected") {
        const auto g = chain(3);
        const auto fit = fit_curvature(g, {});
        const ScoringContext ctx{g, {}, 0.0, std::nullopt};
        CHECK_THROWS_AS(route_score_hyperbolic(ctx, Route({0, 9}), {}, {}, fit), Error);
    }
}
