#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace routerisk::bench {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const noexcept { return lo <= x && x <= hi; }
    bool operator==(const Interval&) const = default;
};

double mean(std::span<const double> xs);

/// Percentile bootstrap of the mean: `resamples` seeded resamples with
/// replacement; bounds are linearly interpolated quantiles of the resample
/// means at (1 -/+ level/100) / 2. Throws Error(InvalidConfig) on no samples.
Interval bootstrap_ci(std::span<const double> samples, std::size_t resamples = 400, double level = 95.0,
                      std::uint64_t seed = 0);

struct SignTest {
    double p_value = 1.0;
    bool flagged = false;  // no discordant pairs
};

/// Two-sided exact binomial test at 1/2, summed in log space.
SignTest exact_sign_test(std::size_t n_plus, std::size_t n_minus);

/// 1-based ranks, ties sharing their mean rank.
std::vector<double> midranks(std::span<const double> xs);

struct Correlation {
    double pearson = 0.0;
    double spearman = 0.0;
    bool defined = true;  // false when either series is constant (both values NaN)
};

/// Throws Error(InvalidConfig) unless the series have equal length >= 3.
Correlation correlations(std::span<const double> x, std::span<const double> y);

}  // namespace routerisk::bench
