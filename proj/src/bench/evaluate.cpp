#include "routerisk/bench/evaluate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <thread>

#include "hashing.hpp"
#include "routerisk/error.hpp"

namespace routerisk::bench {

const GroupAggregate* EvaluationResult::group(std::string_view name) const noexcept {
    for (const auto& g : groups) {
        if (g.group == name) return &g;
    }
    return nullptr;
}

std::uint64_t scenario_state_hash(const Scenario& s) {
    const auto events = s.events();
    return detail::derive_seed(s.snapshot.content_hash(), hash_events(events));
}

GroupAggregate aggregate(std::string group, std::span<const ScenarioRow> rows, const EvaluateOptions& opts) {
    GroupAggregate a;
    a.group = std::move(group);
    a.count = rows.size();
    if (rows.empty()) return a;
    std::vector<double> margins;
    std::vector<double> wins;
    for (const auto& r : rows) {
        margins.push_back(r.margin);
        wins.push_back(r.win ? 1.0 : 0.0);
    }
    a.mean_margin = mean(margins);
    a.win_rate = mean(wins);
    a.margin_ci = bootstrap_ci(margins, opts.bootstrap_resamples, 95.0, opts.bootstrap_seed);
    a.win_ci = bootstrap_ci(wins, opts.bootstrap_resamples, 95.0, opts.bootstrap_seed);
    return a;
}

std::vector<GroupAggregate> aggregate_groups(std::span<const ScenarioRow> rows, const EvaluateOptions& opts) {
    std::vector<std::string> order;
    std::map<std::string, std::vector<ScenarioRow>> by_group;
    for (const auto& r : rows) {
        auto [it, inserted] = by_group.try_emplace(r.group);
        if (inserted) order.push_back(r.group);
        it->second.push_back(r);
    }
    std::vector<GroupAggregate> out;
    for (const auto& name : order) out.push_back(aggregate(name, by_group[name], opts));
    return out;
}

EvaluationResult evaluate(const RouteScorer& scorer, std::span<const Scenario> scenarios, const EvaluateOptions& opts) {
    if (scenarios.empty()) throw Error(ErrorCode::InvalidConfig, "evaluate needs at least one scenario");
    struct Slot {
        std::optional<ScenarioRow> row;
        std::string error;
    };
    std::vector<Slot> slots(scenarios.size());

    auto run = [&](std::size_t i) {
        const Scenario& s = scenarios[i];
        try {
            const auto events = s.events();
            const ScoringContext ctx{s.snapshot, events, s.time, std::nullopt};
            const std::uint64_t before = detail::derive_seed(s.snapshot.content_hash(), hash_events(events));
            const RouteScore safe = scorer.score(ctx, s.safe());
            const std::uint64_t between = detail::derive_seed(s.snapshot.content_hash(), hash_events(events));
            const RouteScore attacked = scorer.score(ctx, s.attacked());
            const std::uint64_t after = detail::derive_seed(s.snapshot.content_hash(), hash_events(events));
            if (before != between || between != after) {
                slots[i].error = "scorer isolation violated: state changed between paired calls";
                return;
            }
            ScenarioRow row;
            row.id = s.id;
            row.group = s.group;
            row.split = s.split;
            row.seed = s.seed;
            row.protocol = s.protocol;
            row.score_safe = safe.value;
            row.score_attacked = attacked.value;
            row.margin = safe.value - attacked.value;
            row.win = row.margin > 0.0;
            row.state_hash = before;
            row.terms_safe = safe.terms;
            row.terms_attacked = attacked.terms;
            if (!std::isfinite(row.margin)) {
                slots[i].error = "non-finite margin";
                return;
            }
            slots[i].row = std::move(row);
        } catch (const std::exception& e) {
            slots[i].error = e.what();
        }
    };

    const std::size_t workers = std::clamp<std::size_t>(opts.threads, 1, scenarios.size());
    if (workers == 1) {
        for (std::size_t i = 0; i < scenarios.size(); ++i) run(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < scenarios.size(); i = next++) run(i);
            });
        }
        for (auto& t : pool) t.join();
    }

    EvaluationResult result;
    result.scorer = scorer.name();
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].row)
            result.rows.push_back(std::move(*slots[i].row));
        else
            result.flagged.push_back({scenarios[i].id, slots[i].error});
    }
    result.groups = aggregate_groups(result.rows, opts);
    result.overall = aggregate("overall", result.rows, opts);
    return result;
}

SignTest paired_sign_test(const EvaluationResult& a, const EvaluationResult& b) {
    std::map<std::string, bool> b_wins;
    for (const auto& r : b.rows) b_wins.emplace(r.id, r.win);
    std::size_t plus = 0;
    std::size_t minus = 0;
    for (const auto& r : a.rows) {
        const auto it = b_wins.find(r.id);
        if (it == b_wins.end() || r.win == it->second) continue;
        (r.win ? plus : minus) += 1;
    }
    return exact_sign_test(plus, minus);
}

std::vector<GateRecord> build_gate_records(std::span<const Scenario> scenarios, const HyperbolicScorer& hyperbolic,
                                           const EuclideanScorer& euclidean) {
    const auto& cfg = hyperbolic.config();
    std::vector<GateRecord> out;
    out.reserve(2 * scenarios.size());
    for (const auto& s : scenarios) {
        const auto events = s.events();
        const ScoringContext ctx{s.snapshot, events, s.time, std::nullopt};
        const double m_hyp = hyperbolic.score(ctx, s.safe()).value - hyperbolic.score(ctx, s.attacked()).value;
        const double m_euc = euclidean.score(ctx, s.safe()).value - euclidean.score(ctx, s.attacked()).value;
        const double kappa = hyperbolic.cache().get_or_fit(s.snapshot, cfg)->kappa;
        for (bool attacked : {true, false}) {
            const Route& r = attacked ? s.attacked() : s.safe();
            const auto phi = extract_features(s.snapshot, r, kappa, cfg.kappa_min, cfg.kappa_max);
            out.push_back({s.id, s.group, s.split, attacked, GateExample::from_margins(phi, m_hyp, m_euc)});
        }
    }
    return out;
}

std::vector<GateExample> examples_of(std::span<const GateRecord> records, std::optional<Split> split) {
    std::vector<GateExample> out;
    for (const auto& r : records) {
        if (!split || r.split == *split) out.push_back(r.example);
    }
    return out;
}

}  // namespace routerisk::bench
