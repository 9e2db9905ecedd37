#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "routerisk/error.hpp"
#include "routerisk/gate.hpp"
#include "support/gradcheck.hpp"
#include "support/graphs.hpp"

using namespace routerisk;
using routerisk::testing::chain;
using routerisk::testing::full_route;

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Two-layer forward pass written out directly from the parameter arrays.
double reference_forward(const GateModel& m, const FeatureVector& phi) {
    double out = m.b2;
    for (std::size_t h = 0; h < kHiddenUnits; ++h) {
        double a = m.b1[h];
        for (std::size_t i = 0; i < kFeatureCount; ++i) a += m.w1[h * kFeatureCount + i] * phi.values[i];
        out += m.w2[h] * std::max(0.0, a);
    }
    return sigmoid(out);
}

RouteScore scalar_score(double v) { return {v, {{"value", v}}}; }

}  // namespace

TEST_SUITE("examples/gate") {
    TEST_CASE("tree snapshot with a covering chain route") {
        const auto g = chain(6);
        const auto phi = extract_features(g, full_route(6), 1.0);
        CHECK(phi[0] == 0.0);
        CHECK(phi[3] == 0.0);
        CHECK(phi[5] == 1.0);
        CHECK(phi[7] == 0.0);
    }

    TEST_CASE("curvature feature endpoints") {
        CHECK(curvature_feature(0.10) == 0.0);
        CHECK(curvature_feature(4.50) == 1.0);
        const auto g = chain(3);
        CHECK(extract_features(g, full_route(3), 0.10)[8] == 0.0);
        CHECK(extract_features(g, full_route(3), 4.50)[8] == 1.0);
    }

    TEST_CASE("directed triangle features") {
        std::vector<NodeAttributes> nodes{{0, 0.2, 1.0}, {1, 0.4, 1.0}, {2, 0.6, 1.0}};
        const GraphSnapshot g(0.0, nodes, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}});
        const auto phi = extract_features(g, Route({0, 1, 2}), 1.0);
        CHECK(phi[1] == 0.0);
        CHECK(phi[2] == 1.0);
        CHECK(phi[3] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
        CHECK(phi[4] == doctest::Approx(0.4).epsilon(1e-15));
    }

    TEST_CASE("all-zero model outputs one half") {
        const GateModel m;
        FeatureVector phi;
        phi.values.fill(0.7);
        CHECK(gate_forward(m, phi) == 0.5);
    }

    TEST_CASE("large output bias saturates the sigmoid") {
        GateModel m;
        m.b2 = 20.0;
        CHECK(gate_forward(m, FeatureVector{}) > 0.999);
    }

    TEST_CASE("hand-set model matches a direct forward pass") {
        GateModel m;
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            m.w1[0 * kFeatureCount + i] = 0.1;
            m.w1[1 * kFeatureCount + i] = (static_cast<double>(i) - 4.0) * 0.05;
            m.w1[2 * kFeatureCount + i] = i % 2 ? -0.3 : 0.2;
        }
        m.b1[0] = -0.2;
        m.b1[1] = 0.3;
        m.b1[2] = -0.05;
        m.w2[0] = 1.5;
        m.w2[1] = -2.0;
        m.w2[2] = 0.75;
        m.b2 = 0.1;
        FeatureVector phi;
        phi.values = {0.9, 0.1, 0.4, 0.0, 0.55, 0.3, 0.8, 0.25, 0.6};
        CHECK(std::abs(gate_forward(m, phi) - reference_forward(m, phi)) <= 1e-12);

        // Hidden 0: 0.1 * 3.9 - 0.2 = 0.19; hidden 1: 0.3 + 0.05 * sum((i-4) phi_i) = 0.3 + 0.05 * 0.35 = 0.3175;
        // hidden 2: 0.2 * 3.25 - 0.3 * 0.65 - 0.05 = 0.405.
        const double logit = 0.1 + 1.5 * 0.19 - 2.0 * 0.3175 + 0.75 * 0.405;
        CHECK(std::abs(gate_forward(m, phi) - sigmoid(logit)) <= 1e-12);
    }

    TEST_CASE("separable clusters are learned") {
        std::mt19937_64 rng(11);
        std::normal_distribution<double> noise(0.0, 0.05);
        std::vector<GateExample> data;
        for (int k = 0; k < 200; ++k) {
            const int y = k % 2;
            FeatureVector phi;
            for (double& x : phi.values) x = std::clamp((y ? 0.75 : 0.25) + noise(rng), 0.0, 1.0);
            data.push_back(GateExample::from_margins(phi, y ? 1.0 : 0.0, 0.5));
        }
        GateHyperparameters hyper;
        hyper.epochs = 200;
        const auto result = train_gate(data, hyper);
        std::size_t correct = 0;
        for (const auto& ex : data) correct += (gate_forward(result.model, ex.features) >= 0.5 ? 1 : 0) == ex.label;
        CHECK(static_cast<double>(correct) / static_cast<double>(data.size()) >= 0.95);
        CHECK(result.model.metadata.loss_curve.back() <= result.model.metadata.loss_curve.front());
    }

    TEST_CASE("loss gradient matches central differences") {
        std::mt19937_64 rng(3);
        const auto model = routerisk::testing::random_gate_model(rng);
        const auto data = routerisk::testing::random_gate_examples(10, rng);
        const auto check = routerisk::testing::check_gate_gradient(model, data);
        CHECK(check.compared > 0);
        CHECK(check.max_relative_error < 1e-4);
        CHECK(check.max_absolute_error_small < 1e-9);
    }

    TEST_CASE("trained model has 133 parameters") {
        std::mt19937_64 rng(5);
        const auto data = routerisk::testing::random_gate_examples(20, rng);
        GateHyperparameters hyper;
        hyper.epochs = 5;
        const auto model = train_gate(data, hyper).model;
        CHECK(GateModel::parameter_count() == 133);
        CHECK(model.flatten().size() == 133);
    }

    TEST_CASE("blend endpoints and midpoint") {
        const auto hyp = scalar_score(0.4);
        const auto euc = scalar_score(-0.2);
        CHECK(blend(1.0, hyp, euc).value == 0.4);
        CHECK(blend(0.0, hyp, euc).value == -0.2);
        CHECK(blend(0.5, hyp, euc).value == doctest::Approx(0.1).epsilon(1e-15));
        CHECK(blend(0.5, hyp, euc).term("pi") == 0.5);
        CHECK_THROWS_AS(blend(1.5, hyp, euc), Error);
    }

    TEST_CASE("perfect separation gives unit AUC") {
        const std::vector<std::pair<double, int>> preds{{0.9, 1}, {0.8, 1}, {0.65, 1}, {0.3, 0}, {0.1, 0}};
        const auto d = gate_diagnostics(preds);
        REQUIRE(d.auc.has_value());
        CHECK(*d.auc == 1.0);
        CHECK(d.accuracy == 1.0);
        CHECK(std::isfinite(d.ece));
        // confidences 0.9, 0.8, 0.65, 0.7, 0.9 all correct
        CHECK(d.ece == doctest::Approx((0.1 + 0.2 + 0.35 + 0.3 + 0.1) / 5.0).epsilon(1e-12));
    }

    TEST_CASE("uninformative predictor on a balanced set") {
        std::vector<std::pair<double, int>> preds;
        for (int k = 0; k < 10; ++k) preds.emplace_back(0.5, k % 2);
        const auto d = gate_diagnostics(preds);
        CHECK(d.accuracy == 0.5);
        CHECK(d.tp == 5);
        CHECK(d.fp == 5);
        REQUIRE(d.auc.has_value());
        CHECK(*d.auc == 0.5);
    }

    TEST_CASE("confusion counts give the stated accuracy") {
        std::vector<std::pair<double, int>> preds;
        for (int k = 0; k < 182; ++k) preds.emplace_back(0.9, 1);
        for (int k = 0; k < 34; ++k) preds.emplace_back(0.1, 0);
        for (int k = 0; k < 30; ++k) preds.emplace_back(0.8, 0);
        for (int k = 0; k < 4; ++k) preds.emplace_back(0.2, 1);
        const auto d = gate_diagnostics(preds);
        CHECK(d.tp == 182);
        CHECK(d.tn == 34);
        CHECK(d.fp == 30);
        CHECK(d.fn == 4);
        CHECK(d.accuracy == doctest::Approx(216.0 / 250.0).epsilon(1e-15));
        CHECK(d.accuracy == doctest::Approx(0.864).epsilon(1e-12));
    }
}
