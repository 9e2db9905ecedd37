#include "routerisk/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "routerisk/error.hpp"

namespace routerisk {

double IntensityConfig::alpha(const std::string& category) const {
    auto it = category_multiplier.find(category);
    return it == category_multiplier.end() ? 1.0 : it->second;
}

void IntensityConfig::validate() const {
    if (!(half_life > 0.0) || !std::isfinite(half_life))
        throw Error(ErrorCode::InvalidConfig, "half_life must be > 0");
    if (!(excitation_decay > 0.0) || !std::isfinite(excitation_decay))
        throw Error(ErrorCode::InvalidConfig, "excitation_decay must be > 0");
    for (const auto& [category, a] : category_multiplier) {
        if (!(a > 0.0) || !std::isfinite(a))
            throw Error(ErrorCode::InvalidConfig, "category multiplier for '" + category + "' must be > 0");
    }
    if (!std::isfinite(burst_coefficient) || !std::isfinite(baseline_threshold))
        throw Error(ErrorCode::InvalidConfig, "burst coefficient and baseline threshold must be finite");
}

bool event_applies(const FailureEvent& e, NodeId v, double t, std::optional<RouteId> route) noexcept {
    if (e.node != v || e.time > t) return false;
    return !e.route_tag || (route && *e.route_tag == *route);
}

namespace {

double decayed_term(const FailureEvent& e, double t, const IntensityConfig& cfg) {
    return e.severity * std::exp(-(t - e.time) / cfg.half_life) * cfg.alpha(e.category);
}

double burst_from_times(std::vector<double>& times, double delta) {
    if (times.size() < 2) return 0.0;
    std::sort(times.begin(), times.end());
    double sum = 0.0;
    for (std::size_t q = 0; q + 1 < times.size(); ++q) sum += std::exp(-(times[q + 1] - times[q]) / delta);
    return sum / static_cast<double>(times.size() - 1);
}

}  // namespace

double base_intensity(NodeId v, double t, std::span<const FailureEvent> events,
                      std::optional<RouteId> route, const IntensityConfig& cfg) {
    double sum = 0.0;
    for (const auto& e : events) {
        if (event_applies(e, v, t, route)) sum += decayed_term(e, t, cfg);
    }
    return sum;
}

double burst_statistic(NodeId v, double t, std::span<const FailureEvent> events,
                       std::optional<RouteId> route, const IntensityConfig& cfg) {
    std::vector<double> times;
    for (const auto& e : events) {
        if (event_applies(e, v, t, route)) times.push_back(e.time);
    }
    return burst_from_times(times, cfg.excitation_decay);
}

NodeIntensity damped_intensity(NodeId v, double t, std::span<const FailureEvent> events,
                               std::optional<RouteId> route, const IntensityConfig& cfg) {
    NodeIntensity out;
    std::vector<double> times;
    for (const auto& e : events) {
        if (!event_applies(e, v, t, route)) continue;
        out.base += decayed_term(e, t, cfg);
        times.push_back(e.time);
    }
    out.event_count = times.size();
    if (out.event_count == 0) return out;

    const double m = static_cast<double>(out.event_count);
    out.mean_decayed = out.base / m;
    out.burst = burst_from_times(times, cfg.excitation_decay);
    const double saturation = std::tanh(out.mean_decayed);
    const double diversity = 1.0 / std::sqrt(m);
    const double overload = 1.0 / (1.0 + std::max(0.0, out.base - cfg.baseline_threshold));
    out.damped = out.base + cfg.burst_coefficient * out.burst * saturation * diversity * overload;
    return out;
}

std::map<NodeId, NodeIntensity> intensities_by_node(double t, std::span<const FailureEvent> events,
                                                    std::optional<RouteId> route,
                                                    const IntensityConfig& cfg) {
    std::map<NodeId, NodeIntensity> out;
    for (const auto& e : events) {
        if (!event_applies(e, e.node, t, route) || out.contains(e.node)) continue;
        out.emplace(e.node, damped_intensity(e.node, t, events, route, cfg));
    }
    return out;
}

}  // namespace routerisk
