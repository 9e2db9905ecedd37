#include "routerisk/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>

#include "hashing.hpp"
#include "routerisk/error.hpp"
#include "routerisk/topology.hpp"

namespace routerisk {

namespace {

constexpr double kBoundaryFraction = 0.999;

double squared_norm(std::span<const double> z) {
    double s = 0.0;
    for (double x : z) s += x * x;
    return s;
}

// acosh(1 + x) without cancellation for small x.
double acosh1p(double x) { return std::log1p(x + std::sqrt(x * (x + 2.0))); }

// Working state for stress minimization over the component's m nodes.
class StressProblem {
public:
    StressProblem(std::size_t m, std::size_t dim, double kappa, std::vector<double> target)
        : m_(m), dim_(dim), kappa_(kappa), target_(std::move(target)) {}

    double stress(const std::vector<double>& z) const {
        double s = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = i + 1; j < m_; ++j) {
                const double r = distance(z, i, j) - target_[i * m_ + j];
                s += r * r;
            }
        }
        return s;
    }

    // Euclidean gradient of the stress, rescaled by the inverse Poincare metric.
    void gradient(const std::vector<double>& z, std::vector<double>& grad) const {
        std::fill(grad.begin(), grad.end(), 0.0);
        const double k = kappa_;
        for (std::size_t i = 0; i < m_; ++i) {
            const double* zi = &z[i * dim_];
            const double ai = 1.0 - k * norm2(zi);
            for (std::size_t j = i + 1; j < m_; ++j) {
                const double* zj = &z[j * dim_];
                const double aj = 1.0 - k * norm2(zj);
                double diff2 = 0.0;
                for (std::size_t c = 0; c < dim_; ++c) diff2 += (zi[c] - zj[c]) * (zi[c] - zj[c]);
                const double x = 2.0 * k * diff2 / (ai * aj);
                if (x < 1e-24) continue;
                const double dist = acosh1p(x) / std::sqrt(k);
                const double residual = dist - target_[i * m_ + j];
                const double dd_dx = 1.0 / (std::sqrt(k) * std::sqrt(x * (x + 2.0)));
                const double scale = 2.0 * residual * dd_dx * 4.0 * k / (ai * aj);
                for (std::size_t c = 0; c < dim_; ++c) {
                    const double delta = zi[c] - zj[c];
                    grad[i * dim_ + c] += scale * (delta + k * diff2 * zi[c] / ai);
                    grad[j * dim_ + c] += scale * (-delta + k * diff2 * zj[c] / aj);
                }
            }
        }
        for (std::size_t i = 0; i < m_; ++i) {
            const double a = 1.0 - k * norm2(&z[i * dim_]);
            const double metric = a * a / 4.0;
            for (std::size_t c = 0; c < dim_; ++c) grad[i * dim_ + c] *= metric;
        }
    }

    void project(std::vector<double>& z) const {
        const double limit = kBoundaryFraction / std::sqrt(kappa_);
        for (std::size_t i = 0; i < m_; ++i) {
            const double n = std::sqrt(norm2(&z[i * dim_]));
            if (n > limit) {
                for (std::size_t c = 0; c < dim_; ++c) z[i * dim_ + c] *= limit / n;
            }
        }
    }

private:
    double norm2(const double* p) const {
        double s = 0.0;
        for (std::size_t c = 0; c < dim_; ++c) s += p[c] * p[c];
        return s;
    }

    double distance(const std::vector<double>& z, std::size_t i, std::size_t j) const {
        const double* zi = &z[i * dim_];
        const double* zj = &z[j * dim_];
        double diff2 = 0.0;
        for (std::size_t c = 0; c < dim_; ++c) diff2 += (zi[c] - zj[c]) * (zi[c] - zj[c]);
        const double x = 2.0 * kappa_ * diff2 / ((1.0 - kappa_ * norm2(zi)) * (1.0 - kappa_ * norm2(zj)));
        return acosh1p(x) / std::sqrt(kappa_);
    }

    std::size_t m_;
    std::size_t dim_;
    double kappa_;
    std::vector<double> target_;
};

}  // namespace

double geodesic_distance(std::span<const double> a, std::span<const double> b, double kappa) {
    if (!(kappa > 0.0)) throw Error(ErrorCode::InvalidConfig, "curvature magnitude must be > 0");
    if (a.size() != b.size()) throw Error(ErrorCode::InvalidConfig, "dimension mismatch");
    const double da = 1.0 - kappa * squared_norm(a);
    const double db = 1.0 - kappa * squared_norm(b);
    if (!(da > 0.0) || !(db > 0.0)) throw Error(ErrorCode::OutOfBall, "point on or outside the ball boundary");
    double diff2 = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) diff2 += (a[c] - b[c]) * (a[c] - b[c]);
    return acosh1p(2.0 * kappa * diff2 / (da * db)) / std::sqrt(kappa);
}

double radial_distance(std::span<const double> z, double kappa) {
    const double r = std::sqrt(kappa * squared_norm(z));
    if (!(r < 1.0)) throw Error(ErrorCode::OutOfBall, "point on or outside the ball boundary");
    return 2.0 * std::atanh(r) / std::sqrt(kappa);
}

std::optional<std::size_t> HyperbolicEmbedding::index_of(NodeId v) const noexcept {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), v);
    if (it == nodes.end() || *it != v) return std::nullopt;
    return static_cast<std::size_t>(it - nodes.begin());
}

HyperbolicEmbedding embed(const GraphSnapshot& g, double kappa, const EmbeddingOptions& opts) {
    if (!(kappa > 0.0)) throw Error(ErrorCode::InvalidConfig, "curvature magnitude must be > 0");
    if (opts.dimension < 1) throw Error(ErrorCode::InvalidConfig, "embedding dimension must be >= 1");

    HyperbolicEmbedding out;
    out.dimension = opts.dimension;
    out.curvature = kappa;
    const std::size_t n = g.node_count();
    const std::size_t dim = opts.dimension;
    out.nodes.reserve(n);
    for (const auto& node : g.nodes()) out.nodes.push_back(node.id);
    out.coords.assign(n * dim, 0.0);
    out.embedded.assign(n, false);
    out.hops.assign(n * n, -1);
    if (n == 0) return out;

    const auto projection = undirected_projection(g);
    for (std::size_t i = 0; i < n; ++i) {
        const auto d = hop_distances(projection, i);
        std::copy(d.begin(), d.end(), out.hops.begin() + static_cast<std::ptrdiff_t>(i * n));
    }
    const auto members = largest_component(projection);
    out.partial = members.size() < n;
    for (std::size_t i : members) out.embedded[i] = true;
    const std::size_t m = members.size();
    if (m < 2) return out;

    std::vector<double> target(m * m, 0.0);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) target[a * m + b] = out.hop(members[a], members[b]);

    StressProblem problem(m, dim, kappa, std::move(target));
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> init(0.0, opts.init_scale / std::sqrt(kappa));
    std::vector<double> z(m * dim);
    for (double& x : z) x = init(rng);
    problem.project(z);

    double stress = problem.stress(z);
    out.initial_stress = stress;
    std::vector<double> grad(z.size());
    std::vector<double> trial(z.size());
    double step = 1.0;
    for (std::size_t it = 0; it < opts.iterations; ++it) {
        problem.gradient(z, grad);
        double g2 = 0.0;
        for (double x : grad) g2 += x * x;
        if (g2 < 1e-24) break;

        bool accepted = false;
        double improvement = 0.0;
        while (step > 1e-12) {
            for (std::size_t c = 0; c < z.size(); ++c) trial[c] = z[c] - step * grad[c];
            problem.project(trial);
            const double s = problem.stress(trial);
            if (s < stress) {
                improvement = stress - s;
                stress = s;
                z.swap(trial);
                accepted = true;
                step *= 2.0;
                break;
            }
            step *= 0.5;
        }
        out.iterations_run = it + 1;
        if (!accepted || improvement <= opts.relative_tolerance * std::max(stress, 1e-12)) break;
    }
    out.final_stress = stress;
    for (std::size_t a = 0; a < m; ++a)
        std::copy_n(z.begin() + static_cast<std::ptrdiff_t>(a * dim), dim,
                    out.coords.begin() + static_cast<std::ptrdiff_t>(members[a] * dim));
    return out;
}

GoldenSectionResult golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                                            double tolerance, std::size_t max_evaluations) {
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    GoldenSectionResult best;
    best.minimum = std::numeric_limits<double>::infinity();
    auto eval = [&](double x) {
        const double y = f(x);
        ++best.evaluations;
        if (y < best.minimum) {
            best.minimum = y;
            best.argmin = x;
        }
        return y;
    };

    if (max_evaluations == 0) return best;
    eval(lo);
    if (best.evaluations < max_evaluations && hi != lo) eval(hi);

    double a = lo;
    double b = hi;
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    if (best.evaluations + 2 > max_evaluations) return best;
    double fc = eval(c);
    double fd = eval(d);
    while (b - a >= tolerance && best.evaluations < max_evaluations) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = eval(d);
        }
    }
    return best;
}

void HyperbolicConfig::validate() const {
    if (!(kappa_min > 0.0) || !(kappa_max > kappa_min))
        throw Error(ErrorCode::InvalidConfig, "curvature bracket must satisfy 0 < min < max");
    if (embedding.dimension < 1) throw Error(ErrorCode::InvalidConfig, "embedding dimension must be >= 1");
    if (!(bracket_tolerance > 0.0)) throw Error(ErrorCode::InvalidConfig, "bracket tolerance must be > 0");
    const auto& w = weights;
    for (double x : {w.compactness, w.tail, w.frontier, w.bottleneck, w.decoder}) {
        if (!(x >= 0.0)) throw Error(ErrorCode::InvalidConfig, "hyperbolic weights must be >= 0");
    }
}

CurvatureFit fit_curvature(const GraphSnapshot& g, const HyperbolicConfig& cfg) {
    CurvatureFit fit;
    const auto projection = undirected_projection(g);
    if (g.node_count() < 2 || largest_component(projection).size() < 2) {
        fit.kappa = cfg.kappa_min;
        fit.degenerate = true;
        fit.embedding = embed(g, cfg.kappa_min, cfg.embedding);
        return fit;
    }
    std::optional<HyperbolicEmbedding> best;
    const auto result = golden_section_minimize(
        [&](double kappa) {
            auto e = embed(g, kappa, cfg.embedding);
            const double s = e.final_stress;
            if (!best || s < best->final_stress) best = std::move(e);
            return s;
        },
        cfg.kappa_min, cfg.kappa_max, cfg.bracket_tolerance, cfg.max_evaluations);
    fit.kappa = result.argmin;
    fit.evaluations = result.evaluations;
    fit.embedding = std::move(*best);
    return fit;
}

std::shared_ptr<const CurvatureFit> EmbeddingCache::get_or_fit(const GraphSnapshot& g,
                                                               const HyperbolicConfig& cfg) {
    detail::Fnv1a h;
    h.add(g.topology_hash());
    h.add(static_cast<std::uint64_t>(cfg.embedding.dimension));
    h.add(static_cast<std::uint64_t>(cfg.embedding.iterations));
    h.add(cfg.embedding.seed);
    h.add(cfg.embedding.init_scale);
    h.add(cfg.embedding.relative_tolerance);
    h.add(cfg.kappa_min);
    h.add(cfg.kappa_max);
    h.add(cfg.bracket_tolerance);
    h.add(static_cast<std::uint64_t>(cfg.max_evaluations));
    const std::uint64_t key = h.value();
    {
        std::shared_lock lock(mutex_);
        auto it = fits_.find(key);
        if (it != fits_.end()) return it->second;
    }
    auto fit = std::make_shared<const CurvatureFit>(fit_curvature(g, cfg));
    std::unique_lock lock(mutex_);
    auto [it, inserted] = fits_.emplace(key, std::move(fit));
    return it->second;
}

std::size_t EmbeddingCache::size() const {
    std::shared_lock lock(mutex_);
    return fits_.size();
}

void EmbeddingCache::clear() {
    std::unique_lock lock(mutex_);
    fits_.clear();
}

RouteScore route_score_hyperbolic(const ScoringContext& ctx, const Route& route, const IntensityConfig& intensity,
                                  const HyperbolicConfig& cfg, const CurvatureFit& fit) {
    validate_route(ctx.graph, route);
    const auto& emb = fit.embedding;
    const double kappa = emb.curvature;
    const auto nodes = route.nodes();
    const std::size_t len = nodes.size();

    std::vector<std::size_t> idx(len);
    for (std::size_t i = 0; i < len; ++i) {
        auto e = emb.index_of(nodes[i]);
        if (!e) throw Error(ErrorCode::InvalidRoute, "embedding does not cover route node " + std::to_string(nodes[i]));
        idx[i] = *e;
    }

    double pair_sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < len; ++i) {
        for (std::size_t j = i + 1; j < len; ++j) {
            pair_sum += geodesic_distance(emb.coord(idx[i]), emb.coord(idx[j]), kappa);
            ++pairs;
        }
    }
    const double compactness = 1.0 / (1.0 + (pairs ? pair_sum / static_cast<double>(pairs) : 0.0));

    double tail = 0.0;
    double frontier = 0.0;
    double bottleneck = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        const NodeId v = nodes[i];
        const auto lam = damped_intensity(v, ctx.time, ctx.events, ctx.route_id, intensity);
        const double risk = cfg.excitation ? lam.damped : lam.base;
        tail = std::max(tail, risk * std::exp(radial_distance(emb.coord(idx[i]), kappa)));

        const std::size_t gi = ctx.graph.index_of(v);
        std::size_t exits = 0;
        for (std::size_t e : ctx.graph.out_edges(gi)) {
            if (!route.contains(ctx.graph.edges()[e].dst)) ++exits;
        }
        frontier += risk * static_cast<double>(exits);
        bottleneck = std::max(bottleneck, ctx.graph.node_at(gi).load);
    }

    double decoder_error = 0.0;
    std::size_t decoder_edges = 0;
    for (std::size_t i = 0; i < len; ++i) {
        for (std::size_t j = 0; j < len; ++j) {
            if (i == j || !ctx.graph.has_edge(nodes[i], nodes[j])) continue;
            const int hops = emb.hop(idx[i], idx[j]);
            if (hops < 0) continue;
            decoder_error +=
                std::abs(geodesic_distance(emb.coord(idx[i]), emb.coord(idx[j]), kappa) - static_cast<double>(hops));
            ++decoder_edges;
        }
    }
    const double decoder = 1.0 / (1.0 + (decoder_edges ? decoder_error / static_cast<double>(decoder_edges) : 0.0));

    const auto& w = cfg.weights;
    RouteScore out;
    out.value = w.compactness * compactness - w.tail * tail - w.frontier * frontier - w.bottleneck * bottleneck +
                w.decoder * decoder;
    out.terms = {{"compactness", compactness}, {"tail", tail},       {"frontier", frontier},
                 {"bottleneck", bottleneck},   {"decoder", decoder}, {"curvature", kappa}};
    return out;
}

RouteScore HyperbolicScorer::score(const ScoringContext& ctx, const Route& route) const {
    const auto fit = cache_->get_or_fit(ctx.graph, cfg_);
    return route_score_hyperbolic(ctx, route, intensity_, cfg_, *fit);
}

}  // namespace routerisk
