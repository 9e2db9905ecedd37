#pragma once

// Geometry gate: structural feature map, the 9-12-1 selector MLP, score
// blending and classifier diagnostics.

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "routerisk/euclidean.hpp"
#include "routerisk/graph.hpp"
#include "routerisk/hyperbolic.hpp"
#include "routerisk/scoring.hpp"

namespace routerisk {

inline constexpr std::size_t kFeatureCount = 9;
inline constexpr std::size_t kHiddenUnits = 12;
inline constexpr std::uint16_t kAllFeatures = 0x1FF;

inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "edge_surplus", "reciprocal",   "triangle",   "route_crosslink", "route_load_mean",
    "route_length_norm", "shell_growth", "cycle_rank", "curvature_norm"};

struct FeatureVector {
    std::array<double, kFeatureCount> values{};
    std::uint16_t clamped = 0;  // bit i set when feature i was pulled back into [0,1]

    double operator[](std::size_t i) const { return values[i]; }
};

/// (kappa - lo) / (hi - lo), clamped to [0,1].
double curvature_feature(double kappa, double kappa_min = 0.10, double kappa_max = 4.50);

/// Structural features of (g, r). `fitted_kappa` is the snapshot's fitted
/// curvature. Throws Error(InvalidRoute).
FeatureVector extract_features(const GraphSnapshot& g, const Route& r, double fitted_kappa,
                               double kappa_min = 0.10, double kappa_max = 4.50);

struct GateTrainingMetadata {
    std::uint64_t seed = 0;
    std::size_t epochs = 0;
    double learning_rate = 0.0;
    std::size_t batch_size = 0;
    std::uint16_t feature_mask = kAllFeatures;
    std::vector<double> loss_curve;  // full-dataset loss, index 0 = before training

    bool operator==(const GateTrainingMetadata&) const = default;
};

struct GateModel {
    std::array<double, kHiddenUnits * kFeatureCount> w1{};  // row-major, hidden x feature
    std::array<double, kHiddenUnits> b1{};
    std::array<double, kHiddenUnits> w2{};
    double b2 = 0.0;
    GateTrainingMetadata metadata;

    static constexpr std::size_t parameter_count() noexcept {
        return kHiddenUnits * kFeatureCount + kHiddenUnits + kHiddenUnits + 1;
    }
    /// Parameters in the order w1, b1, w2, b2.
    std::vector<double> flatten() const;
    void unflatten(std::span<const double> params);
    bool finite() const noexcept;

    bool operator==(const GateModel&) const = default;
};

/// Pre-sigmoid output, with masked-out features forced to zero.
double gate_logit(const GateModel& m, const FeatureVector& phi);
/// sigmoid(W2 relu(W1 phi + b1) + b2). Throws Error(CorruptModel) on non-finite parameters.
double gate_forward(const GateModel& m, const FeatureVector& phi);

/// Y = 1 iff the hyperbolic margin is at least the Euclidean one.
inline int gate_label(double margin_hyp, double margin_euc) noexcept { return margin_hyp >= margin_euc ? 1 : 0; }

struct GateExample {
    FeatureVector features;
    int label = 0;
    double margin_hyp = 0.0;
    double margin_euc = 0.0;

    static GateExample from_margins(const FeatureVector& phi, double margin_hyp, double margin_euc) {
        return {phi, gate_label(margin_hyp, margin_euc), margin_hyp, margin_euc};
    }
};

struct GateHyperparameters {
    double learning_rate = 0.05;
    std::size_t epochs = 300;
    std::size_t batch_size = 32;
    std::uint64_t seed = 0;
    std::uint16_t feature_mask = kAllFeatures;

    bool operator==(const GateHyperparameters&) const = default;
};

struct GateTrainingResult {
    GateModel model;
    bool single_class = false;  // training ran, but only one label was present
};

/// He-initialized mini-batch gradient descent on mean binary cross-entropy.
/// Throws Error(InvalidConfig) on an empty dataset.
GateTrainingResult train_gate(std::span<const GateExample> data, const GateHyperparameters& hyper);

/// Mean binary cross-entropy.
double gate_loss(const GateModel& m, std::span<const GateExample> data);
/// Mean BCE and its gradient in flatten() order.
double gate_loss_and_gradient(const GateModel& m, std::span<const GateExample> data, std::vector<double>& grad);

/// pi * hyp + (1 - pi) * euc, recording pi and both inputs as terms.
RouteScore blend(double pi, const RouteScore& hyp, const RouteScore& euc);

struct GateDiagnostics {
    std::size_t n = 0;
    std::optional<double> auc;  // empty when only one class is present
    double accuracy = 0.0;
    double ece = 0.0;
    std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
    double low_entropy = 0.0;   // pi outside [0.2, 0.8]
    double mid_entropy = 0.0;
    double high_entropy = 0.0;  // pi inside [0.45, 0.55]
    double positive_rate = 0.0;
};

/// Threshold 0.5 with pi == 0.5 predicting class 1; 10-bin ECE on the
/// predicted-class confidence; AUC as the midrank Mann-Whitney statistic.
GateDiagnostics gate_diagnostics(std::span<const std::pair<double, int>> predictions);

/// Mann-Whitney AUC with midranks; empty when a class is missing.
std::optional<double> roc_auc(std::span<const std::pair<double, int>> predictions);

/// Algorithm: features -> pi -> both geometry scores -> blend.
class GatedScorer final : public RouteScorer {
public:
    GatedScorer(GateModel model, std::shared_ptr<const HyperbolicScorer> hyperbolic,
                std::shared_ptr<const EuclideanScorer> euclidean)
        : model_(std::move(model)), hyperbolic_(std::move(hyperbolic)), euclidean_(std::move(euclidean)) {}

    std::string name() const override { return "learned_gate"; }
    RouteScore score(const ScoringContext& ctx, const Route& route) const override;

    double preference(const ScoringContext& ctx, const Route& route) const;
    const GateModel& model() const noexcept { return model_; }

private:
    GateModel model_;
    std::shared_ptr<const HyperbolicScorer> hyperbolic_;
    std::shared_ptr<const EuclideanScorer> euclidean_;
};

}  // namespace routerisk
