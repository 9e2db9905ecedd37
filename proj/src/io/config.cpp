#include "routerisk/io/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <type_traits>

#include "routerisk/error.hpp"
#include "routerisk/io/json_io.hpp"

namespace routerisk::io {

namespace {

// Field lists shared by the writer and the reader.

template <typename V> void fields(V& v, IntensityConfig& c) {
    v("half_life", c.half_life);
    v("excitation_decay", c.excitation_decay);
    v("category_multiplier", c.category_multiplier);
    v("burst_coefficient", c.burst_coefficient);
    v("baseline_threshold", c.baseline_threshold);
}
template <typename V> void fields(V& v, EuclideanWeights& c) {
    v("infected_mass", c.infected_mass);
    v("frontier", c.frontier);
    v("tail", c.tail);
    v("latency", c.latency);
    v("bottleneck", c.bottleneck);
}
template <typename V> void fields(V& v, EuclideanConfig& c) {
    v("steps", c.steps);
    v("recovery_base", c.recovery_base);
    v("diffusion_strength", c.diffusion_strength);
    v("max_risk", c.max_risk);
    v("weights", c.weights);
}
template <typename V> void fields(V& v, EmbeddingOptions& c) {
    v("dimension", c.dimension);
    v("iterations", c.iterations);
    v("seed", c.seed);
    v("init_scale", c.init_scale);
    v("relative_tolerance", c.relative_tolerance);
}
template <typename V> void fields(V& v, HyperbolicWeights& c) {
    v("compactness", c.compactness);
    v("tail", c.tail);
    v("frontier", c.frontier);
    v("bottleneck", c.bottleneck);
    v("decoder", c.decoder);
}
template <typename V> void fields(V& v, HyperbolicConfig& c) {
    v("embedding", c.embedding);
    v("kappa_min", c.kappa_min);
    v("kappa_max", c.kappa_max);
    v("bracket_tolerance", c.bracket_tolerance);
    v("max_evaluations", c.max_evaluations);
    v("weights", c.weights);
    v("excitation", c.excitation);
}
template <typename V> void fields(V& v, GateHyperparameters& c) {
    v("learning_rate", c.learning_rate);
    v("epochs", c.epochs);
    v("batch_size", c.batch_size);
    v("seed", c.seed);
    v("feature_mask", c.feature_mask);
}
template <typename V> void fields(V& v, bench::AttributeRanges& c) {
    v("load_max", c.load_max);
    v("reliability_min", c.reliability_min);
    v("fitness_min", c.fitness_min);
}
template <typename V> void fields(V& v, bench::RouteEnumerationOptions& c) {
    v("count", c.count);
    v("max_length", c.max_length);
    v("preferred_min_length", c.preferred_min_length);
    v("attempts", c.attempts);
}
template <typename V> void fields(V& v, bench::RegimeParams& c) {
    v("min_nodes", c.min_nodes);
    v("max_nodes", c.max_nodes);
    v("min_branch", c.min_branch);
    v("max_branch", c.max_branch);
    v("attributes", c.attributes);
    v("routes", c.routes);
    v("scenarios_per_seed", c.scenarios_per_seed);
    v("pairs_per_snapshot", c.pairs_per_snapshot);
    v("background_events", c.background_events);
    v("background_severity_max", c.background_severity_max);
    v("churn_fraction", c.churn_fraction);
    v("cross_edge_fraction", c.cross_edge_fraction);
    v("dense_edge_probability", c.dense_edge_probability);
    v("reciprocal_fraction", c.reciprocal_fraction);
    v("time", c.time);
    v("attack_window", c.attack_window);
}
template <typename V> void fields(V& v, bench::FamilyParams& c) {
    v("nodes", c.nodes);
    v("ws_k", c.ws_k);
    v("ws_beta", c.ws_beta);
    v("er_p", c.er_p);
    v("attributes", c.attributes);
    v("routes", c.routes);
    v("time", c.time);
    v("attack_window", c.attack_window);
}
template <typename V> void fields(V& v, bench::AttackProfile& c) {
    v("protocol", c.protocol);
    v("severity_scale", c.severity_scale);
}
template <typename V> void fields(V& v, PathConfig& c) {
    v("scenarios", c.scenarios);
    v("family_scenarios", c.family_scenarios);
    v("weights", c.weights);
    v("labels", c.labels);
    v("report_dir", c.report_dir);
}
template <typename V> void fields(V& v, BenchmarkConfig& c) {
    v("regimes", c.regimes);
    v("scenarios_per_regime", c.scenarios_per_regime);
    v("families", c.families);
    v("family_seeds", c.family_seeds);
    v("family_profiles", c.family_profiles);
    v("protocol", c.protocol);
    v("seed", c.seed);
    v("regime_params", c.regime_params);
    v("family_params", c.family_params);
    v("scorers", c.scorers);
    v("eval_split", c.eval_split);
    v("hand_switch_threshold", c.hand_switch_threshold);
    v("threads", c.threads);
}
template <typename V> void fields(V& v, CascadeRunConfig& c) {
    v("branching", c.branching);
    v("p_grid", c.p_grid);
    v("depth", c.depth);
    v("trials", c.trials);
    v("seed", c.seed);
    v("epsilon", c.epsilon);
}
template <typename V> void fields(V& v, LatencyConfig& c) {
    v("calls", c.calls);
    v("snapshots", c.snapshots);
}
template <typename V> void fields(V& v, RunConfig& c) {
    v("paths", c.paths);
    v("intensity", c.intensity);
    v("euclidean", c.euclidean);
    v("hyperbolic", c.hyperbolic);
    v("gate", c.gate);
    v("benchmark", c.benchmark);
    v("cascade", c.cascade);
    v("latency", c.latency);
}

struct NullVisitor {
    template <typename T> void operator()(const char*, T&) {}
};

template <typename T>
concept Visitable = requires(NullVisitor& v, T& t) { fields(v, t); };

template <typename T>
concept NamedEnum = std::is_same_v<T, bench::Regime> || std::is_same_v<T, bench::Family> ||
                    std::is_same_v<T, bench::AttackProtocol>;

template <typename T> struct IsVector : std::false_type {};
template <typename T> struct IsVector<std::vector<T>> : std::true_type {};

template <typename T> Json encode(const T& x);
template <typename T> void decode(const Json& j, T& x, const std::string& where);

struct Writer {
    Json& out;
    template <typename T> void operator()(const char* name, T& field) { out[name] = encode(field); }
};

struct Reader {
    const Json& in;
    const std::string& where;
    std::set<std::string> known;
    template <typename T> void operator()(const char* name, T& field) {
        known.insert(name);
        if (in.contains(name)) decode(in.at(name), field, where + "." + name);
    }
};

bench::Regime parse_named(const std::string& s, bench::Regime*) { return bench::parse_regime(s); }
bench::Family parse_named(const std::string& s, bench::Family*) { return bench::parse_family(s); }
bench::AttackProtocol parse_named(const std::string& s, bench::AttackProtocol*) { return bench::parse_protocol(s); }

template <typename T> Json encode(const T& x) {
    if constexpr (Visitable<T>) {
        Json out = Json::object();
        Writer w{out};
        fields(w, const_cast<T&>(x));  // Writer only reads
        return out;
    } else if constexpr (NamedEnum<T>) {
        return std::string(bench::to_string(x));
    } else if constexpr (IsVector<T>::value) {
        Json out = Json::array();
        for (const auto& item : x) out.push_back(encode(item));
        return out;
    } else {
        return Json(x);
    }
}

template <typename T> void decode(const Json& j, T& x, const std::string& where) {
    if constexpr (Visitable<T>) {
        if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, where + ": expected an object");
        Reader r{j, where, {}};
        fields(r, x);
        for (const auto& [key, value] : j.items()) {
            if (!r.known.contains(key)) throw Error(ErrorCode::InvalidConfig, where + ": unknown key '" + key + "'");
        }
    } else if constexpr (NamedEnum<T>) {
        if (!j.is_string()) throw Error(ErrorCode::InvalidConfig, where + ": expected a name");
        x = parse_named(j.get<std::string>(), static_cast<T*>(nullptr));
    } else if constexpr (IsVector<T>::value) {
        if (!j.is_array()) throw Error(ErrorCode::InvalidConfig, where + ": expected an array");
        T out(j.size());
        for (std::size_t i = 0; i < j.size(); ++i) decode(j.at(i), out[i], where + "[" + std::to_string(i) + "]");
        x = std::move(out);
    } else {
        try {
            if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
                if (!j.is_number_unsigned()) throw Error(ErrorCode::InvalidConfig, where + ": expected a non-negative integer");
            }
            x = j.get<T>();
        } catch (const Error&) {
            throw;
        } catch (const std::exception& e) {
            throw Error(ErrorCode::InvalidConfig, where + ": " + e.what());
        }
    }
}

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::InvalidConfig, what);
}

const std::set<std::string>& known_scorers() {
    static const std::set<std::string> names{"native",       "euclidean",      "hyperbolic", "hyperbolic_no_excitation",
                                             "structural",   "hand_switching", "learned_gate", "oracle",
                                             "constant"};
    return names;
}

}  // namespace

std::vector<double> CascadeRunConfig::effective_grid() const {
    if (!p_grid.empty()) return p_grid;
    std::vector<double> grid;
    for (int i = 1; i <= 20; ++i) grid.push_back(static_cast<double>(i) / 20.0);
    return grid;
}

void RunConfig::validate() const {
    intensity.validate();
    euclidean.validate();
    hyperbolic.validate();
    require(gate.learning_rate > 0.0 && std::isfinite(gate.learning_rate), "gate.learning_rate must be positive");
    require(gate.batch_size >= 1, "gate.batch_size must be >= 1");
    require(gate.feature_mask <= kAllFeatures, "gate.feature_mask must fit in 9 bits");
    require(benchmark.scenarios_per_regime >= 1, "benchmark.scenarios_per_regime must be >= 1");
    require(benchmark.eval_split == "eval" || benchmark.eval_split == "train" || benchmark.eval_split == "all",
            "benchmark.eval_split must be eval, train or all");
    require(benchmark.threads >= 1, "benchmark.threads must be >= 1");
    for (const auto& s : benchmark.scorers) require(known_scorers().contains(s), "unknown scorer '" + s + "'");
    const auto& rp = benchmark.regime_params;
    require(rp.min_nodes >= 2 && rp.min_nodes <= rp.max_nodes, "regime_params node range is invalid");
    require(rp.min_branch >= 1 && rp.min_branch <= rp.max_branch, "regime_params branch range is invalid");
    require(benchmark.family_params.nodes >= 3, "family_params.nodes must be >= 3");
    require(!cascade.branching.empty(), "cascade.branching must not be empty");
    for (double b : cascade.branching) require(b > 1.0 && std::isfinite(b), "cascade.branching values must be > 1");
    for (double p : cascade.p_grid) require(p >= 0.0 && p <= 1.0, "cascade.p_grid values must be in [0,1]");
    require(cascade.depth >= 1 && cascade.trials >= 1, "cascade.depth and cascade.trials must be >= 1");
    require(latency.calls >= 1 && latency.snapshots >= 1, "latency.calls and latency.snapshots must be >= 1");
}

nlohmann::json to_json(const RunConfig& c) { return encode(c); }

RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig c;
    decode(j, c, "config");
    c.validate();
    return c;
}

RunConfig load_config(const std::filesystem::path& path) { return config_from_json(read_json_file(path)); }

void save_config(const std::filesystem::path& path, const RunConfig& c) { write_json_file(path, to_json(c)); }

}  // namespace routerisk::io
