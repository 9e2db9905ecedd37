#pragma once

// JSON persistence for snapshots, events, scenarios and gate weights.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "routerisk/bench/scenario.hpp"
#include "routerisk/gate.hpp"
#include "routerisk/graph.hpp"

namespace routerisk::io {

using Json = nlohmann::json;

inline constexpr int kGateFormatVersion = 1;

Json to_json(const GraphSnapshot& g);
GraphSnapshot snapshot_from_json(const Json& j);

Json to_json(const FailureEvent& e);
FailureEvent event_from_json(const Json& j);

Json to_json(const Route& r);
Route route_from_json(const Json& j);

Json to_json(const bench::Scenario& s);
bench::Scenario scenario_from_json(const Json& j);

/// {version, dims:[9,12,1], W1, b1, W2, b2, metadata}; W1 is 12 rows of 9.
Json to_json(const GateModel& m);
GateModel gate_from_json(const Json& j);

/// Parse failures surface as Error(Parse); IO failures as Error(Io), both
/// naming the path (and line for JSON lines).
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

std::vector<bench::Scenario> read_scenarios_jsonl(const std::filesystem::path& path);
void write_scenarios_jsonl(const std::filesystem::path& path, std::span<const bench::Scenario> scenarios);

std::vector<FailureEvent> read_events_jsonl(const std::filesystem::path& path);
void write_events_jsonl(const std::filesystem::path& path, std::span<const FailureEvent> events);

GateModel load_gate(const std::filesystem::path& path);
void save_gate(const std::filesystem::path& path, const GateModel& m);

}  // namespace routerisk::io
