#include "routerisk/bench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "routerisk/error.hpp"

namespace routerisk::bench {

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double pearson(std::span<const double> x, std::span<const double> y) {
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace

double mean(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

Interval bootstrap_ci(std::span<const double> samples, std::size_t resamples, double level, std::uint64_t seed) {
    if (samples.empty()) throw Error(ErrorCode::InvalidConfig, "bootstrap needs at least one sample");
    if (resamples == 0 || !(level > 0.0 && level < 100.0))
        throw Error(ErrorCode::InvalidConfig, "bootstrap needs resamples >= 1 and level in (0,100)");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);
    std::vector<double> means(resamples);
    for (auto& m : means) {
        double s = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i) s += samples[pick(rng)];
        m = s / static_cast<double>(samples.size());
    }
    std::sort(means.begin(), means.end());
    const double alpha = (1.0 - level / 100.0) / 2.0;
    return {quantile_sorted(means, alpha), quantile_sorted(means, 1.0 - alpha)};
}

SignTest exact_sign_test(std::size_t n_plus, std::size_t n_minus) {
    const std::size_t n = n_plus + n_minus;
    if (n == 0) return {1.0, true};
    const std::size_t k = std::min(n_plus, n_minus);
    const double nd = static_cast<double>(n);
    // log P(X = i) for X ~ Binomial(n, 1/2).
    std::vector<double> terms;
    for (std::size_t i = 0; i <= k; ++i) {
        const double id = static_cast<double>(i);
        terms.push_back(std::lgamma(nd + 1.0) - std::lgamma(id + 1.0) - std::lgamma(nd - id + 1.0) - nd * std::log(2.0));
    }
    const double peak = *std::max_element(terms.begin(), terms.end());
    double s = 0.0;
    for (double t : terms) s += std::exp(t - peak);
    const double log_tail = peak + std::log(s);
    return {std::min(1.0, std::exp(std::log(2.0) + log_tail)), false};
}

std::vector<double> midranks(std::span<const double> xs) {
    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(xs.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

Correlation correlations(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 3)
        throw Error(ErrorCode::InvalidConfig, "correlations need equal-length series of at least 3 points");
    Correlation c;
    c.pearson = pearson(x, y);
    const auto rx = midranks(x);
    const auto ry = midranks(y);
    c.spearman = pearson(rx, ry);
    c.defined = !std::isnan(c.pearson);
    return c;
}

}  // namespace routerisk::bench
