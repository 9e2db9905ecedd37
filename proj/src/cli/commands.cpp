#include "routerisk/cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <chrono>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include "routerisk/error.hpp"
#include "routerisk/io/json_io.hpp"

namespace routerisk::cli {

namespace {

namespace fs = std::filesystem;
using io::Json;

// Shortest representation that parses back to the same double.
std::string num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

Json interval_json(const bench::Interval& i) { return Json::array({i.lo, i.hi}); }

Json aggregate_json(const bench::GroupAggregate& a) {
    return {{"group", a.group},
            {"count", a.count},
            {"mean_margin", a.mean_margin},
            {"win_rate", a.win_rate},
            {"margin_ci", interval_json(a.margin_ci)},
            {"win_ci", interval_json(a.win_ci)}};
}

Json diagnostics_json(const GateDiagnostics& d) {
    Json j{{"n", d.n},
           {"accuracy", d.accuracy},
           {"ece", d.ece},
           {"confusion", {{"tp", d.tp}, {"tn", d.tn}, {"fp", d.fp}, {"fn", d.fn}}},
           {"entropy_bands", {{"low", d.low_entropy}, {"mid", d.mid_entropy}, {"high", d.high_entropy}}},
           {"positive_rate", d.positive_rate}};
    j["auc"] = d.auc ? Json(*d.auc) : Json(nullptr);
    return j;
}

std::vector<bench::Scenario> read_optional_scenarios(const std::string& path) {
    if (path.empty() || !fs::exists(path)) return {};
    return io::read_scenarios_jsonl(path);
}

std::string decomposition_csv(std::span<const SuiteEvaluation> suites) {
    static const std::pair<const char*, const char*> components[] = {
        {"native", "native"}, {"euclidean", "euclidean"}, {"structural", "structural"}, {"learned_gate", "blended"}};
    std::ostringstream out;
    out << "suite,component,scorer,win_rate,mean_margin,win_rate_delta_vs_native\n";
    for (const auto& suite : suites) {
        const bench::EvaluationResult* native = nullptr;
        for (const auto& r : suite.results) {
            if (r.scorer == "native") native = &r;
        }
        for (const auto& [scorer, label] : components) {
            for (const auto& r : suite.results) {
                if (r.scorer != scorer) continue;
                out << suite.suite << ',' << label << ',' << r.scorer << ',' << num(r.overall.win_rate) << ','
                    << num(r.overall.mean_margin) << ','
                    << (native ? num(r.overall.win_rate - native->overall.win_rate) : std::string("")) << '\n';
            }
        }
    }
    return out.str();
}

std::string terms_csv(std::span<const SuiteEvaluation> suites) {
    std::ostringstream out;
    out << "suite,scorer,id,route,term,value\n";
    for (const auto& suite : suites) {
        for (const auto& r : suite.results) {
            for (const auto& row : r.rows) {
                for (const auto& t : row.terms_safe)
                    out << suite.suite << ',' << r.scorer << ',' << row.id << ",safe," << t.name << ',' << num(t.value) << '\n';
                for (const auto& t : row.terms_attacked)
                    out << suite.suite << ',' << r.scorer << ',' << row.id << ",attacked," << t.name << ','
                        << num(t.value) << '\n';
            }
        }
    }
    return out.str();
}

}  // namespace

ScorerSet::ScorerSet(const io::RunConfig& cfg, std::optional<GateModel> gate_model)
    : cache(std::make_shared<EmbeddingCache>()), gate(std::move(gate_model)) {
    HyperbolicConfig plain = cfg.hyperbolic;
    plain.excitation = false;
    HyperbolicConfig excited = cfg.hyperbolic;
    excited.excitation = true;
    hyperbolic = std::make_shared<HyperbolicScorer>(cfg.intensity, excited, cache);
    hyperbolic_no_excitation = std::make_shared<HyperbolicScorer>(cfg.intensity, plain, cache);
    euclidean = std::make_shared<EuclideanScorer>(cfg.intensity, cfg.euclidean);
}

std::unique_ptr<RouteScorer> ScorerSet::make(const std::string& name, const io::RunConfig& cfg,
                                             std::span<const bench::Scenario> scenarios) const {
    // Thin owning wrapper so shared scorers fit the unique_ptr interface.
    class Shared final : public RouteScorer {
    public:
        explicit Shared(std::shared_ptr<const RouteScorer> s) : s_(std::move(s)) {}
        std::string name() const override { return s_->name(); }
        RouteScore score(const ScoringContext& ctx, const Route& r) const override { return s_->score(ctx, r); }

    private:
        std::shared_ptr<const RouteScorer> s_;
    };

    if (name == "native") return std::make_unique<bench::NativeScorer>();
    if (name == "euclidean") return std::make_unique<Shared>(euclidean);
    if (name == "hyperbolic") return std::make_unique<Shared>(hyperbolic);
    if (name == "hyperbolic_no_excitation") return std::make_unique<Shared>(hyperbolic_no_excitation);
    if (name == "structural") return std::make_unique<bench::StructuralScorer>(cfg.intensity);
    if (name == "hand_switching")
        return std::make_unique<bench::HandSwitchingScorer>(hyperbolic, euclidean, cfg.benchmark.hand_switch_threshold);
    if (name == "oracle") return std::make_unique<bench::OracleScorer>(scenarios);
    if (name == "constant") return std::make_unique<bench::ConstantScorer>(0.0);
    if (name == "learned_gate") {
        if (!gate) throw Error(ErrorCode::Io, "learned_gate needs gate weights at " + cfg.paths.weights);
        return std::make_unique<GatedScorer>(*gate, hyperbolic, euclidean);
    }
    throw Error(ErrorCode::InvalidConfig, "unknown scorer '" + name + "'");
}

std::vector<bench::Scenario> select_split(std::span<const bench::Scenario> scenarios, const std::string& split) {
    std::vector<bench::Scenario> out;
    for (const auto& s : scenarios) {
        if (split == "all" || bench::to_string(s.split) == split) out.push_back(s);
    }
    return out;
}

GenResult cmd_gen(const io::RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const auto& b = cfg.benchmark;
    std::vector<bench::Scenario> regimes;
    for (auto r : b.regimes) {
        auto v = bench::generate_regime_scenarios(r, b.scenarios_per_regime, b.seed, b.protocol, b.regime_params);
        regimes.insert(regimes.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
    }
    std::vector<bench::Scenario> families;
    for (auto f : b.families) {
        auto v = bench::generate_family_scenarios(f, b.family_seeds, b.family_profiles, b.seed, b.family_params);
        families.insert(families.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
    }
    io::write_scenarios_jsonl(cfg.paths.scenarios, regimes);
    io::write_scenarios_jsonl(cfg.paths.family_scenarios, families);
    log << "wrote " << regimes.size() << " regime scenarios to " << cfg.paths.scenarios << "\n"
        << "wrote " << families.size() << " family scenarios to " << cfg.paths.family_scenarios << "\n";
    return {regimes.size(), families.size()};
}

TrainResult cmd_train(const io::RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    if (!fs::exists(cfg.paths.scenarios))
        throw Error(ErrorCode::Io, "training scenarios not found at " + cfg.paths.scenarios + " (run gen first)");
    const auto all = io::read_scenarios_jsonl(cfg.paths.scenarios);
    const auto train = select_split(all, "train");
    if (train.empty()) throw Error(ErrorCode::DegenerateScenario, "no train-split scenarios in " + cfg.paths.scenarios);

    const ScorerSet scorers(cfg);
    const auto records = bench::build_gate_records(train, *scorers.hyperbolic, *scorers.euclidean);
    const auto examples = bench::examples_of(records);
    const auto result = train_gate(examples, cfg.gate);
    io::save_gate(cfg.paths.weights, result.model);

    std::ostringstream labels;
    labels << "scenario_id,group,split,route,label,margin_hyp,margin_euc";
    for (auto name : kFeatureNames) labels << ',' << name;
    labels << '\n';
    TrainResult out;
    for (const auto& r : records) {
        const auto& e = r.example;
        labels << r.scenario_id << ',' << r.group << ',' << bench::to_string(r.split) << ','
               << (r.attacked_route ? "attacked" : "safe") << ',' << e.label << ',' << num(e.margin_hyp) << ','
               << num(e.margin_euc);
        for (double v : e.features.values) labels << ',' << num(v);
        labels << '\n';
        out.positives += static_cast<std::size_t>(e.label);
    }
    io::write_text_file(cfg.paths.labels, labels.str());

    out.examples = examples.size();
    out.single_class = result.single_class;
    const auto& curve = result.model.metadata.loss_curve;
    out.initial_loss = curve.empty() ? 0.0 : curve.front();
    out.final_loss = curve.empty() ? 0.0 : curve.back();
    log << "trained gate on " << out.examples << " examples (" << out.positives << " positive), loss "
        << num(out.initial_loss) << " -> " << num(out.final_loss) << "\n";
    if (out.single_class) log << "warning: training labels contain a single class\n";
    log << "wrote " << cfg.paths.weights << " and " << cfg.paths.labels << "\n";
    return out;
}

EvalResult cmd_eval(const io::RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    if (!fs::exists(cfg.paths.scenarios))
        throw Error(ErrorCode::Io, "scenarios not found at " + cfg.paths.scenarios + " (run gen first)");
    const auto& names = cfg.benchmark.scorers;
    const bool wants_gate = std::find(names.begin(), names.end(), "learned_gate") != names.end();
    std::optional<GateModel> gate;
    if (wants_gate) {
        if (!fs::exists(cfg.paths.weights))
            throw Error(ErrorCode::Io, "learned_gate selected but no gate weights at " + cfg.paths.weights);
        gate = io::load_gate(cfg.paths.weights);
    }
    const ScorerSet scorers(cfg, gate);
    bench::EvaluateOptions opts;
    opts.threads = cfg.benchmark.threads;
    opts.bootstrap_seed = cfg.benchmark.seed;

    EvalResult out;
    const std::pair<std::string, std::vector<bench::Scenario>> suites[] = {
        {"regimes", select_split(io::read_scenarios_jsonl(cfg.paths.scenarios), cfg.benchmark.eval_split)},
        {"families", select_split(read_optional_scenarios(cfg.paths.family_scenarios), cfg.benchmark.eval_split)}};
    Json summary{{"split", cfg.benchmark.eval_split}, {"suites", Json::object()}};
    for (const auto& [suite, scenarios] : suites) {
        if (scenarios.empty()) continue;
        SuiteEvaluation ev{suite, {}};
        for (const auto& name : names) {
            const auto scorer = scorers.make(name, cfg, scenarios);
            ev.results.push_back(bench::evaluate(*scorer, scenarios, opts));
        }
        Json js{{"scenarios", scenarios.size()}, {"scorers", Json::object()}};
        const bench::EvaluationResult* native = nullptr;
        for (const auto& r : ev.results) {
            if (r.scorer == "native") native = &r;
        }
        for (const auto& r : ev.results) {
            Json groups = Json::array();
            for (const auto& g : r.groups) groups.push_back(aggregate_json(g));
            Json flagged = Json::array();
            for (const auto& f : r.flagged) flagged.push_back({{"id", f.id}, {"message", f.message}});
            Json entry{{"overall", aggregate_json(r.overall)}, {"groups", std::move(groups)}, {"flagged", std::move(flagged)}};
            if (native && &r != native) {
                const auto st = bench::paired_sign_test(r, *native);
                entry["sign_test_vs_native"] = {{"p_value", st.p_value}, {"flagged", st.flagged}};
            }
            js["scorers"][r.scorer] = std::move(entry);
            log << suite << "  " << r.scorer << ": win rate " << num(r.overall.win_rate) << ", mean margin "
                << num(r.overall.mean_margin) << " over " << r.rows.size() << " scenarios";
            if (!r.flagged.empty()) log << " (" << r.flagged.size() << " flagged)";
            log << "\n";
        }
        summary["suites"][suite] = std::move(js);
        if (suite == "regimes" && gate) {
            const auto records = bench::build_gate_records(scenarios, *scorers.hyperbolic, *scorers.euclidean);
            std::vector<std::pair<double, int>> predictions;
            for (const auto& rec : records)
                predictions.emplace_back(gate_forward(*gate, rec.example.features), rec.example.label);
            out.gate = gate_diagnostics(predictions);
            summary["gate"] = diagnostics_json(*out.gate);
        }
        out.suites.push_back(std::move(ev));
    }

    const fs::path dir = cfg.paths.report_dir;
    io::write_text_file(dir / "scenarios.csv", scenario_rows_csv(out.suites));
    io::write_text_file(dir / "terms.csv", terms_csv(out.suites));
    io::write_text_file(dir / "decomposition.csv", decomposition_csv(out.suites));
    io::write_json_file(dir / "summary.json", summary);
    log << decomposition_csv(out.suites) << "wrote reports to " << dir.string() << "\n";
    return out;
}

std::vector<CriticalityReport> cmd_cascade(const io::RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const auto& c = cfg.cascade;
    const auto grid = c.effective_grid();
    std::vector<CriticalityReport> reports;
    Json summary = Json::array();
    for (std::size_t i = 0; i < c.branching.size(); ++i) {
        reports.push_back(criticality_report(c.branching[i], grid, c.depth, c.trials, c.seed + i, c.epsilon));
        const auto& r = reports.back();
        summary.push_back({{"b", r.branching},
                           {"analytic_threshold", r.analytic_threshold},
                           {"empirical_threshold", r.empirical_threshold ? Json(*r.empirical_threshold) : Json(nullptr)}});
        log << "b=" << num(r.branching) << ": analytic threshold " << num(r.analytic_threshold) << ", empirical "
            << (r.empirical_threshold ? num(*r.empirical_threshold) : std::string("none")) << "\n";
    }
    const fs::path dir = cfg.paths.report_dir;
    io::write_text_file(dir / "criticality.csv", criticality_csv(reports));
    io::write_json_file(dir / "criticality_summary.json", summary);
    log << "wrote " << (dir / "criticality.csv").string() << "\n";
    return reports;
}

LatencyRow measure_latency(const RouteScorer& scorer, std::span<const bench::Scenario> scenarios, std::size_t calls) {
    if (scenarios.empty()) throw Error(ErrorCode::InvalidConfig, "latency measurement needs scenarios");
    std::vector<std::vector<FailureEvent>> events;
    for (const auto& s : scenarios) events.push_back(s.events());
    std::vector<double> us(calls);
    double sink = 0.0;
    for (std::size_t i = 0; i < calls; ++i) {
        const std::size_t k = (i / 2) % scenarios.size();
        const auto& s = scenarios[k];
        const ScoringContext ctx{s.snapshot, events[k], s.time, std::nullopt};
        const Route& r = i % 2 == 0 ? s.safe() : s.attacked();
        const auto t0 = std::chrono::steady_clock::now();
        sink += scorer.score(ctx, r).value;
        const auto t1 = std::chrono::steady_clock::now();
        us[i] = std::chrono::duration<double, std::micro>(t1 - t0).count();
    }
    static_cast<void>(sink);
    LatencyRow row;
    row.scorer = scorer.name();
    row.calls = calls;
    row.mean_us = bench::mean(us);
    std::sort(us.begin(), us.end());
    row.median_us = us[us.size() / 2];
    row.p95_us = us[std::min(us.size() - 1, static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(us.size()))) - 1)];
    return row;
}

std::vector<LatencyRow> cmd_bench(const io::RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    if (!fs::exists(cfg.paths.scenarios))
        throw Error(ErrorCode::Io, "scenarios not found at " + cfg.paths.scenarios + " (run gen first)");
    const auto all = io::read_scenarios_jsonl(cfg.paths.scenarios);
    std::vector<bench::Scenario> sample;
    std::set<std::uint64_t> seen;
    for (const auto& s : all) {
        if (sample.size() >= cfg.latency.snapshots) break;
        if (s.snapshot.node_count() > 60 || !seen.insert(s.snapshot.content_hash()).second) continue;
        sample.push_back(s);
    }
    if (sample.empty()) throw Error(ErrorCode::DegenerateScenario, "no snapshots with at most 60 nodes");

    std::optional<GateModel> gate;
    if (fs::exists(cfg.paths.weights)) gate = io::load_gate(cfg.paths.weights);
    const ScorerSet scorers(cfg, gate);
    std::vector<LatencyRow> rows;
    for (const auto& name : cfg.benchmark.scorers) {
        if (name == "learned_gate" && !gate) {
            log << "skipping learned_gate: no weights at " << cfg.paths.weights << "\n";
            continue;
        }
        const auto scorer = scorers.make(name, cfg, sample);
        // Warm the embedding cache so timings measure scoring only.
        for (const auto& s : sample) {
            const auto events = s.events();
            scorer->score({s.snapshot, events, s.time, std::nullopt}, s.safe());
        }
        rows.push_back(measure_latency(*scorer, sample, cfg.latency.calls));
    }
    const std::string csv = latency_csv(rows);
    io::write_text_file(fs::path(cfg.paths.report_dir) / "latency.csv", csv);
    log << csv;
    return rows;
}

std::string criticality_csv(std::span<const CriticalityReport> reports) {
    std::ostringstream out;
    out << "b,p,slope,classification,analytic_threshold\n";
    for (const auto& r : reports) {
        for (const auto& row : r.rows) {
            out << num(r.branching) << ',' << num(row.p) << ',' << num(row.slope) << ',' << to_string(row.classification)
                << ',' << num(r.analytic_threshold) << '\n';
        }
    }
    return out.str();
}

std::string scenario_rows_csv(std::span<const SuiteEvaluation> suites) {
    std::ostringstream out;
    out << "suite,scorer,id,group,split,seed,protocol,score_safe,score_attacked,margin,win\n";
    for (const auto& suite : suites) {
        for (const auto& r : suite.results) {
            for (const auto& row : r.rows) {
                out << suite.suite << ',' << r.scorer << ',' << row.id << ',' << row.group << ','
                    << bench::to_string(row.split) << ',' << row.seed << ',' << bench::to_string(row.protocol) << ','
                    << num(row.score_safe) << ',' << num(row.score_attacked) << ',' << num(row.margin) << ','
                    << (row.win ? 1 : 0) << '\n';
            }
        }
    }
    return out.str();
}

std::string latency_csv(std::span<const LatencyRow> rows) {
    std::ostringstream out;
    out << "scorer,calls,mean_us,median_us,p95_us\n";
    for (const auto& r : rows)
        out << r.scorer << ',' << r.calls << ',' << num(r.mean_us) << ',' << num(r.median_us) << ',' << num(r.p95_us) << '\n';
    return out.str();
}

}  // namespace routerisk::cli
