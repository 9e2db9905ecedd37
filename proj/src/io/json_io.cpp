#include "routerisk/io/json_io.hpp"

#include <fstream>
#include <sstream>

#include "routerisk/error.hpp"

namespace routerisk::io {

namespace {

namespace fs = std::filesystem;

template <typename F>
auto parsing(const std::string& where, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(ErrorCode::Parse, where + ": " + e.what());
    }
}

template <typename T>
void write_jsonl(const fs::path& path, std::span<const T> items) {
    std::string out;
    for (const auto& item : items) {
        out += to_json(item).dump();
        out += '\n';
    }
    write_text_file(path, out);
}

template <typename T, typename F>
std::vector<T> read_jsonl(const fs::path& path, F&& from_json) {
    std::istringstream in(read_text_file(path));
    std::vector<T> out;
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        out.push_back(parsing(path.string() + ":" + std::to_string(n), [&] { return from_json(Json::parse(line)); }));
    }
    return out;
}

}  // namespace

Json to_json(const GraphSnapshot& g) {
    Json nodes = Json::array();
    for (const auto& n : g.nodes()) nodes.push_back({{"id", n.id}, {"load", n.load}, {"fitness", n.fitness}});
    Json edges = Json::array();
    for (const auto& e : g.edges()) edges.push_back({{"src", e.src}, {"dst", e.dst}, {"reliability", e.reliability}});
    return {{"timestamp", g.timestamp()}, {"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

GraphSnapshot snapshot_from_json(const Json& j) {
    std::vector<NodeAttributes> nodes;
    for (const auto& n : j.at("nodes"))
        nodes.push_back({n.at("id").get<NodeId>(), n.value("load", 0.0), n.value("fitness", 1.0)});
    std::vector<DirectedEdge> edges;
    for (const auto& e : j.at("edges"))
        edges.push_back({e.at("src").get<NodeId>(), e.at("dst").get<NodeId>(), e.value("reliability", 1.0)});
    return GraphSnapshot(j.value("timestamp", 0.0), std::move(nodes), std::move(edges));
}

Json to_json(const FailureEvent& e) {
    Json j{{"time", e.time}, {"node", e.node}, {"severity", e.severity}, {"category", e.category}};
    if (e.route_tag) j["route_tag"] = *e.route_tag;
    return j;
}

FailureEvent event_from_json(const Json& j) {
    FailureEvent e;
    e.time = j.at("time").get<double>();
    e.node = j.at("node").get<NodeId>();
    e.severity = j.at("severity").get<double>();
    e.category = j.value("category", std::string("failure"));
    if (j.contains("route_tag") && !j.at("route_tag").is_null()) e.route_tag = j.at("route_tag").get<RouteId>();
    validate_event(e);
    return e;
}

Json to_json(const Route& r) { return Json(std::vector<NodeId>(r.nodes().begin(), r.nodes().end())); }

Route route_from_json(const Json& j) { return Route(j.get<std::vector<NodeId>>()); }

Json to_json(const bench::Scenario& s) {
    Json routes = Json::array();
    for (const auto& r : s.candidate_routes) routes.push_back(to_json(r));
    Json injected = Json::array();
    for (const auto& e : s.injected_events) injected.push_back(to_json(e));
    Json background = Json::array();
    for (const auto& e : s.background_events) background.push_back(to_json(e));
    return {{"id", s.id},
            {"group", s.group},
            {"seed", s.seed},
            {"split", bench::to_string(s.split)},
            {"protocol", bench::to_string(s.protocol)},
            {"severity_scale", s.severity_scale},
            {"time", s.time},
            {"snapshot", to_json(s.snapshot)},
            {"candidate_routes", std::move(routes)},
            {"attacked_index", s.attacked_index},
            {"safe_index", s.safe_index},
            {"injected_events", std::move(injected)},
            {"background_events", std::move(background)}};
}

bench::Scenario scenario_from_json(const Json& j) {
    bench::Scenario s;
    s.id = j.at("id").get<std::string>();
    s.group = j.at("group").get<std::string>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.split = bench::parse_split(j.at("split").get<std::string>());
    s.protocol = bench::parse_protocol(j.at("protocol").get<std::string>());
    s.severity_scale = j.value("severity_scale", 1.0);
    s.time = j.at("time").get<double>();
    s.snapshot = snapshot_from_json(j.at("snapshot"));
    for (const auto& r : j.at("candidate_routes")) s.candidate_routes.push_back(route_from_json(r));
    s.attacked_index = j.at("attacked_index").get<std::size_t>();
    s.safe_index = j.at("safe_index").get<std::size_t>();
    for (const auto& e : j.at("injected_events")) s.injected_events.push_back(event_from_json(e));
    for (const auto& e : j.value("background_events", Json::array())) s.background_events.push_back(event_from_json(e));
    if (s.attacked_index >= s.candidate_routes.size() || s.safe_index >= s.candidate_routes.size() ||
        s.attacked_index == s.safe_index)
        throw Error(ErrorCode::Parse, "scenario " + s.id + ": bad attacked/safe indices");
    for (const auto& r : s.candidate_routes) validate_route(s.snapshot, r);
    return s;
}

Json to_json(const GateModel& m) {
    Json w1 = Json::array();
    for (std::size_t h = 0; h < kHiddenUnits; ++h) {
        Json row = Json::array();
        for (std::size_t f = 0; f < kFeatureCount; ++f) row.push_back(m.w1[h * kFeatureCount + f]);
        w1.push_back(std::move(row));
    }
    const auto& md = m.metadata;
    return {{"version", kGateFormatVersion},
            {"dims", {kFeatureCount, kHiddenUnits, 1}},
            {"W1", std::move(w1)},
            {"b1", m.b1},
            {"W2", Json::array({m.w2})},
            {"b2", Json::array({m.b2})},
            {"metadata",
             {{"seed", md.seed},
              {"epochs", md.epochs},
              {"learning_rate", md.learning_rate},
              {"batch_size", md.batch_size},
              {"feature_mask", md.feature_mask},
              {"loss_curve", md.loss_curve}}}};
}

GateModel gate_from_json(const Json& j) {
    if (j.at("version").get<int>() != kGateFormatVersion)
        throw Error(ErrorCode::CorruptModel, "unsupported gate format version");
    if (j.at("dims") != Json({kFeatureCount, kHiddenUnits, 1}))
        throw Error(ErrorCode::CorruptModel, "gate dims must be [9,12,1]");
    GateModel m;
    const auto& w1 = j.at("W1");
    if (w1.size() != kHiddenUnits) throw Error(ErrorCode::CorruptModel, "W1 must have 12 rows");
    for (std::size_t h = 0; h < kHiddenUnits; ++h) {
        const auto row = w1.at(h).get<std::vector<double>>();
        if (row.size() != kFeatureCount) throw Error(ErrorCode::CorruptModel, "W1 rows must have 9 columns");
        for (std::size_t f = 0; f < kFeatureCount; ++f) m.w1[h * kFeatureCount + f] = row[f];
    }
    const auto b1 = j.at("b1").get<std::vector<double>>();
    const auto w2 = j.at("W2").at(0).get<std::vector<double>>();
    const auto b2 = j.at("b2").get<std::vector<double>>();
    if (b1.size() != kHiddenUnits || w2.size() != kHiddenUnits || b2.size() != 1)
        throw Error(ErrorCode::CorruptModel, "gate parameter shapes do not match [9,12,1]");
    std::copy(b1.begin(), b1.end(), m.b1.begin());
    std::copy(w2.begin(), w2.end(), m.w2.begin());
    m.b2 = b2[0];
    if (j.contains("metadata")) {
        const auto& md = j.at("metadata");
        m.metadata.seed = md.value("seed", std::uint64_t{0});
        m.metadata.epochs = md.value("epochs", std::size_t{0});
        m.metadata.learning_rate = md.value("learning_rate", 0.0);
        m.metadata.batch_size = md.value("batch_size", std::size_t{0});
        m.metadata.feature_mask = md.value("feature_mask", kAllFeatures);
        m.metadata.loss_curve = md.value("loss_curve", std::vector<double>{});
    }
    if (!m.finite()) throw Error(ErrorCode::CorruptModel, "gate parameters are not finite");
    return m;
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << content;
    if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

Json read_json_file(const fs::path& path) {
    const std::string text = read_text_file(path);
    return parsing(path.string(), [&] { return Json::parse(text); });
}

void write_json_file(const fs::path& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

std::vector<bench::Scenario> read_scenarios_jsonl(const fs::path& path) {
    return read_jsonl<bench::Scenario>(path, scenario_from_json);
}

void write_scenarios_jsonl(const fs::path& path, std::span<const bench::Scenario> scenarios) {
    write_jsonl(path, scenarios);
}

std::vector<FailureEvent> read_events_jsonl(const fs::path& path) {
    return read_jsonl<FailureEvent>(path, event_from_json);
}

void write_events_jsonl(const fs::path& path, std::span<const FailureEvent> events) { write_jsonl(path, events); }

GateModel load_gate(const fs::path& path) {
    const Json j = read_json_file(path);
    return parsing(path.string(), [&] { return gate_from_json(j); });
}

void save_gate(const fs::path& path, const GateModel& m) { write_json_file(path, to_json(m)); }

}  // namespace routerisk::io
