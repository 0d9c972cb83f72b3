#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "edgeledger/contracts/records.hpp"

namespace edgeledger::sim {

using contracts::DeviceRecord;
using jsonio::Json;

// One network link as mean + jitter + loss. Probe latency over a link pair
// lands near 2*(baseOneWayMs_src + baseOneWayMs_dst) plus handshake overhead.
struct LinkProfile {
    double base_one_way_ms = 0.0;
    double jitter_ms = 0.0;  // uniform +/- applied to the round trip
    double failure_probability = 0.0;
};

struct ResourceProfile {
    double cpu_mean = 0.0;
    double cpu_jitter = 0.0;
    double mem_mean = 0.0;
    double mem_jitter = 0.0;
    std::int64_t container_count = 0;
};

struct ScenarioDevice {
    DeviceRecord record;
    LinkProfile link;
    ResourceProfile resources;
};

struct ScenarioSpec {
    std::string name;
    std::vector<ScenarioDevice> devices;
    int collection_seconds = 30;
    int tick_seconds = 3;
    std::int64_t selection_window_minutes = 1;
    std::uint64_t rng_seed = 0;

    std::vector<const ScenarioDevice*> servers() const;
    std::vector<const ScenarioDevice*> sensors() const;

    Json to_json() const;
};

// Parses and fully validates a scenario document. Unknown fields and
// invariant violations are rejected with the offending name; syntax errors
// carry the line number.
ScenarioSpec load_scenario(const std::filesystem::path& path);
ScenarioSpec parse_scenario(const std::string& text);

struct ServerReportRow {
    std::string server_id;
    double mean_latency_ms = 0.0;
    double mean_cpu = 0.0;
    double mean_mem = 0.0;
};

struct ScenarioReport {
    std::string scenario;
    std::string mode;  // "realtime" or "virtual"
    std::string selected_server_id;
    std::vector<ServerReportRow> servers;  // selection order
    std::vector<std::string> excluded_servers;
    double read_mean_ms = 0.0;
    double write_mean_ms = 0.0;

    Json to_json() const;
    std::string dump() const;
    static ScenarioReport from_json(const Json& j);
};

struct Expectation {
    std::string selected_server_id;
    std::map<std::string, std::pair<double, double>> mean_latency_ranges_ms;
};

Expectation load_expectation(const std::filesystem::path& path);
Expectation parse_expectation(const std::string& text);

struct CompareResult {
    bool pass = true;
    std::vector<std::string> diffs;
};

CompareResult compare_to_expectation(const ScenarioReport& report, const Expectation& expected);

}  // namespace edgeledger::sim
