#include "routerisk/gate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "routerisk/error.hpp"
#include "routerisk/topology.hpp"

namespace routerisk {

namespace {

double clamp_feature(double x, std::size_t index, std::uint16_t& clamped) {
    if (x < 0.0 || x > 1.0) {
        clamped |= static_cast<std::uint16_t>(1u << index);
        return std::clamp(x, 0.0, 1.0);
    }
    return x;
}

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + e^z) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

std::array<double, kFeatureCount> masked_input(const FeatureVector& phi, std::uint16_t mask) {
    std::array<double, kFeatureCount> x{};
    for (std::size_t i = 0; i < kFeatureCount; ++i) x[i] = (mask >> i) & 1u ? phi.values[i] : 0.0;
    return x;
}

struct ForwardPass {
    std::array<double, kFeatureCount> input{};
    std::array<double, kHiddenUnits> pre{};
    std::array<double, kHiddenUnits> hidden{};
    double logit = 0.0;
};

ForwardPass forward(const GateModel& m, const FeatureVector& phi) {
    ForwardPass f;
    f.input = masked_input(phi, m.metadata.feature_mask);
    f.logit = m.b2;
    for (std::size_t h = 0; h < kHiddenUnits; ++h) {
        double a = m.b1[h];
        for (std::size_t i = 0; i < kFeatureCount; ++i) a += m.w1[h * kFeatureCount + i] * f.input[i];
        f.pre[h] = a;
        f.hidden[h] = a > 0.0 ? a : 0.0;
        f.logit += m.w2[h] * f.hidden[h];
    }
    return f;
}

}  // namespace

double curvature_feature(double kappa, double kappa_min, double kappa_max) {
    return std::clamp((kappa - kappa_min) / (kappa_max - kappa_min), 0.0, 1.0);
}

FeatureVector extract_features(const GraphSnapshot& g, const Route& r, double fitted_kappa, double kappa_min,
                               double kappa_max) {
    validate_route(g, r);
    const double n = static_cast<double>(g.node_count());
    const double route_n = static_cast<double>(r.size());
    const GraphSnapshot sub = route_subgraph(g, r);

    double load_sum = 0.0;
    for (const auto& node : sub.nodes()) load_sum += node.load;

    FeatureVector phi;
    auto& v = phi.values;
    v[0] = clamp_feature((static_cast<double>(g.edge_count()) - (n - 1.0)) / n, 0, phi.clamped);
    v[1] = reciprocal_ratio(g);
    v[2] = triangle_density(g);
    v[3] = clamp_feature(std::max(0.0, static_cast<double>(sub.edge_count()) - (route_n - 1.0)) / route_n, 3,
                         phi.clamped);
    v[4] = load_sum / route_n;
    v[5] = route_n / n;
    v[6] = shell_growth_slope(bfs_shells(g)).phi7;
    v[7] = clamp_feature(cycle_rank_raw(g), 7, phi.clamped);
    v[8] = clamp_feature((fitted_kappa - kappa_min) / (kappa_max - kappa_min), 8, phi.clamped);
    return phi;
}

std::vector<double> GateModel::flatten() const {
    std::vector<double> p;
    p.reserve(parameter_count());
    p.insert(p.end(), w1.begin(), w1.end());
    p.insert(p.end(), b1.begin(), b1.end());
    p.insert(p.end(), w2.begin(), w2.end());
    p.push_back(b2);
    return p;
}

void GateModel::unflatten(std::span<const double> params) {
    if (params.size() != parameter_count())
        throw Error(ErrorCode::CorruptModel, "expected " + std::to_string(parameter_count()) + " parameters");
    auto it = params.begin();
    std::copy_n(it, w1.size(), w1.begin());
    it += static_cast<std::ptrdiff_t>(w1.size());
    std::copy_n(it, b1.size(), b1.begin());
    it += static_cast<std::ptrdiff_t>(b1.size());
    std::copy_n(it, w2.size(), w2.begin());
    it += static_cast<std::ptrdiff_t>(w2.size());
    b2 = *it;
}

bool GateModel::finite() const noexcept {
    auto ok = [](double x) { return std::isfinite(x); };
    return std::all_of(w1.begin(), w1.end(), ok) && std::all_of(b1.begin(), b1.end(), ok) &&
           std::all_of(w2.begin(), w2.end(), ok) && std::isfinite(b2);
}

double gate_logit(const GateModel& m, const FeatureVector& phi) { return forward(m, phi).logit; }

double gate_forward(const GateModel& m, const FeatureVector& phi) {
    if (!m.finite()) throw Error(ErrorCode::CorruptModel, "gate has non-finite parameters");
    return sigmoid(gate_logit(m, phi));
}

double gate_loss(const GateModel& m, std::span<const GateExample> data) {
    if (data.empty()) return 0.0;
    double loss = 0.0;
    for (const auto& ex : data) {
        const double z = forward(m, ex.features).logit;
        loss += softplus(z) - static_cast<double>(ex.label) * z;
    }
    return loss / static_cast<double>(data.size());
}

double gate_loss_and_gradient(const GateModel& m, std::span<const GateExample> data, std::vector<double>& grad) {
    grad.assign(GateModel::parameter_count(), 0.0);
    if (data.empty()) return 0.0;
    constexpr std::size_t b1_off = kHiddenUnits * kFeatureCount;
    constexpr std::size_t w2_off = b1_off + kHiddenUnits;
    constexpr std::size_t b2_off = w2_off + kHiddenUnits;
    const double inv_n = 1.0 / static_cast<double>(data.size());

    double loss = 0.0;
    for (const auto& ex : data) {
        const auto f = forward(m, ex.features);
        const double y = static_cast<double>(ex.label);
        loss += softplus(f.logit) - y * f.logit;
        const double dz = (sigmoid(f.logit) - y) * inv_n;
        grad[b2_off] += dz;
        for (std::size_t h = 0; h < kHiddenUnits; ++h) {
            grad[w2_off + h] += dz * f.hidden[h];
            if (f.pre[h] <= 0.0) continue;
            const double dpre = dz * m.w2[h];
            grad[b1_off + h] += dpre;
            for (std::size_t i = 0; i < kFeatureCount; ++i) grad[h * kFeatureCount + i] += dpre * f.input[i];
        }
    }
    return loss * inv_n;
}

GateTrainingResult train_gate(std::span<const GateExample> data, const GateHyperparameters& hyper) {
    if (data.empty()) throw Error(ErrorCode::InvalidConfig, "gate training needs at least one example");
    if (hyper.batch_size == 0) throw Error(ErrorCode::InvalidConfig, "batch size must be >= 1");

    GateTrainingResult result;
    const auto positives = std::count_if(data.begin(), data.end(), [](const GateExample& e) { return e.label == 1; });
    result.single_class = positives == 0 || static_cast<std::size_t>(positives) == data.size();

    GateModel& m = result.model;
    std::mt19937_64 rng(hyper.seed);
    std::normal_distribution<double> init_hidden(0.0, std::sqrt(2.0 / static_cast<double>(kFeatureCount)));
    std::normal_distribution<double> init_output(0.0, std::sqrt(2.0 / static_cast<double>(kHiddenUnits)));
    for (double& w : m.w1) w = init_hidden(rng);
    for (double& w : m.w2) w = init_output(rng);
    m.metadata = {hyper.seed, hyper.epochs, hyper.learning_rate, hyper.batch_size, hyper.feature_mask, {}};
    m.metadata.loss_curve.push_back(gate_loss(m, data));

    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<GateExample> batch;
    std::vector<double> grad;
    for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size(); start += hyper.batch_size) {
            const std::size_t stop = std::min(order.size(), start + hyper.batch_size);
            batch.clear();
            for (std::size_t k = start; k < stop; ++k) batch.push_back(data[order[k]]);
            gate_loss_and_gradient(m, batch, grad);
            auto params = m.flatten();
            for (std::size_t p = 0; p < params.size(); ++p) params[p] -= hyper.learning_rate * grad[p];
            m.unflatten(params);
        }
        m.metadata.loss_curve.push_back(gate_loss(m, data));
    }
    return result;
}

RouteScore blend(double pi, const RouteScore& hyp, const RouteScore& euc) {
    if (!(pi >= 0.0 && pi <= 1.0)) throw Error(ErrorCode::InvalidConfig, "gate preference must lie in [0,1]");
    RouteScore out;
    out.value = pi * hyp.value + (1.0 - pi) * euc.value;
    out.terms = {{"pi", pi}, {"hyperbolic", hyp.value}, {"euclidean", euc.value}};
    return out;
}

std::optional<double> roc_auc(std::span<const std::pair<double, int>> predictions) {
    const std::size_t n = predictions.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return predictions[a].first < predictions[b].first; });
    std::vector<double> rank(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && predictions[order[j]].first == predictions[order[i]].first) ++j;
        const double midrank = (static_cast<double>(i) + static_cast<double>(j) + 1.0) / 2.0;
        for (std::size_t k = i; k < j; ++k) rank[order[k]] = midrank;
        i = j;
    }
    double pos = 0.0;
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (predictions[i].second == 1) {
            pos += 1.0;
            rank_sum += rank[i];
        }
    }
    const double neg = static_cast<double>(n) - pos;
    if (pos == 0.0 || neg == 0.0) return std::nullopt;
    return (rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg);
}

GateDiagnostics gate_diagnostics(std::span<const std::pair<double, int>> predictions) {
    GateDiagnostics d;
    d.n = predictions.size();
    if (d.n == 0) return d;
    d.auc = roc_auc(predictions);

    constexpr std::size_t bins = 10;
    std::array<double, bins> conf_sum{};
    std::array<double, bins> correct_sum{};
    std::array<std::size_t, bins> count{};
    std::size_t low = 0;
    std::size_t high = 0;
    std::size_t positives = 0;
    for (const auto& [pi, y] : predictions) {
        const int predicted = pi >= 0.5 ? 1 : 0;
        if (y == 1) ++positives;
        if (predicted == 1 && y == 1) ++d.tp;
        if (predicted == 0 && y == 0) ++d.tn;
        if (predicted == 1 && y == 0) ++d.fp;
        if (predicted == 0 && y == 1) ++d.fn;

        const double confidence = std::max(pi, 1.0 - pi);
        const std::size_t bin = std::min(bins - 1, static_cast<std::size_t>(confidence * bins));
        conf_sum[bin] += confidence;
        correct_sum[bin] += predicted == y ? 1.0 : 0.0;
        ++count[bin];

        if (pi < 0.2 || pi > 0.8) ++low;
        if (pi >= 0.45 && pi <= 0.55) ++high;
    }
    const double total = static_cast<double>(d.n);
    d.accuracy = static_cast<double>(d.tp + d.tn) / total;
    for (std::size_t b = 0; b < bins; ++b) {
        if (count[b] == 0) continue;
        const double c = static_cast<double>(count[b]);
        d.ece += (c / total) * std::abs(conf_sum[b] / c - correct_sum[b] / c);
    }
    d.low_entropy = static_cast<double>(low) / total;
    d.high_entropy = static_cast<double>(high) / total;
    d.mid_entropy = 1.0 - d.low_entropy - d.high_entropy;
    d.positive_rate = static_cast<double>(positives) / total;
    return d;
}

double GatedScorer::preference(const ScoringContext& ctx, const Route& route) const {
    const auto& cfg = hyperbolic_->config();
    const auto fit = hyperbolic_->cache().get_or_fit(ctx.graph, cfg);
    const auto phi = extract_features(ctx.graph, route, fit->kappa, cfg.kappa_min, cfg.kappa_max);
    return gate_forward(model_, phi);
}

RouteScore GatedScorer::score(const ScoringContext& ctx, const Route& route) const {
    const double pi = preference(ctx, route);
    return blend(pi, hyperbolic_->score(ctx, route), euclidean_->score(ctx, route));
}

}  // namespace routerisk
