#include "edgeledger/sim/scenario.hpp"

#include <fstream>
#include <sstream>

#include "edgeledger/errors.hpp"

namespace edgeledger::sim {

using jsonio::reject_unknown_fields;
using jsonio::require;
using jsonio::require_int;
using jsonio::require_number;
using jsonio::require_string;

namespace {

[[noreturn]] void invalid(const std::string& message) {
    throw ContractError(ErrorCode::validation, "scenario: " + message);
}

LinkProfile parse_link(const Json& j) {
    const char* what = "link profile";
    reject_unknown_fields(j, {"baseOneWayMs", "jitterMs", "failureProbability"}, what);
    LinkProfile p;
    p.base_one_way_ms = require_number(j, "baseOneWayMs", what);
    p.jitter_ms = require_number(j, "jitterMs", what);
    p.failure_probability = require_number(j, "failureProbability", what);
    if (p.base_one_way_ms < 0) invalid("baseOneWayMs must be >= 0");
    if (p.jitter_ms < 0) invalid("jitterMs must be >= 0");
    if (p.failure_probability < 0 || p.failure_probability > 1)
        invalid("failureProbability must be in [0,1]");
    return p;
}

ResourceProfile parse_resources(const Json& j) {
    const char* what = "resource profile";
    reject_unknown_fields(j, {"cpuMean", "cpuJitter", "memMean", "memJitter", "containerCount"},
                          what);
    ResourceProfile p;
    p.cpu_mean = require_number(j, "cpuMean", what);
    p.cpu_jitter = require_number(j, "cpuJitter", what);
    p.mem_mean = require_number(j, "memMean", what);
    p.mem_jitter = require_number(j, "memJitter", what);
    p.container_count = require_int(j, "containerCount", what);
    if (p.cpu_mean < 0 || p.cpu_mean > 100) invalid("cpuMean must be in [0,100]");
    if (p.mem_mean < 0 || p.mem_mean > 100) invalid("memMean must be in [0,100]");
    if (p.cpu_jitter < 0 || p.mem_jitter < 0) invalid("jitter must be >= 0");
    if (p.container_count < 0) invalid("containerCount must be >= 0");
    return p;
}

}  // namespace

std::vector<const ScenarioDevice*> ScenarioSpec::servers() const {
    std::vector<const ScenarioDevice*> out;
    for (const auto& d : devices)
        if (d.record.role == contracts::DeviceRole::edge_server) out.push_back(&d);
    return out;
}

std::vector<const ScenarioDevice*> ScenarioSpec::sensors() const {
    std::vector<const ScenarioDevice*> out;
    for (const auto& d : devices)
        if (d.record.role == contracts::DeviceRole::sensor) out.push_back(&d);
    return out;
}

Json ScenarioSpec::to_json() const {
    Json j;
    j["name"] = name;
    j["rngSeed"] = rng_seed;
    j["collectionSeconds"] = collection_seconds;
    j["tickSeconds"] = tick_seconds;
    j["selectionWindowMinutes"] = selection_window_minutes;
    Json devs = Json::array();
    for (const auto& d : devices) {
        Json dj;
        dj["record"] = d.record.to_json();
        Json link;
        link["baseOneWayMs"] = d.link.base_one_way_ms;
        link["jitterMs"] = d.link.jitter_ms;
        link["failureProbability"] = d.link.failure_probability;
        dj["link"] = std::move(link);
        Json rp;
        rp["cpuMean"] = d.resources.cpu_mean;
        rp["cpuJitter"] = d.resources.cpu_jitter;
        rp["memMean"] = d.resources.mem_mean;
        rp["memJitter"] = d.resources.mem_jitter;
        rp["containerCount"] = d.resources.container_count;
        dj["resources"] = std::move(rp);
        devs.push_back(std::move(dj));
    }
    j["devices"] = std::move(devs);
    return j;
}

ScenarioSpec parse_scenario(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // Byte offset -> line number for the error message.
        std::size_t line = 1;
        for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
            if (text[i] == '\n') ++line;
        throw ContractError(ErrorCode::validation,
                            "scenario: parse error at line " + std::to_string(line) + ": " +
                                e.what());
    }

    const char* what = "scenario";
    reject_unknown_fields(doc,
                          {"name", "rngSeed", "collectionSeconds", "tickSeconds",
                           "selectionWindowMinutes", "devices"},
                          what);
    ScenarioSpec spec;
    spec.name = require_string(doc, "name", what);
    spec.rng_seed = static_cast<std::uint64_t>(require_int(doc, "rngSeed", what));
    spec.collection_seconds = static_cast<int>(require_int(doc, "collectionSeconds", what));
    spec.tick_seconds = static_cast<int>(require_int(doc, "tickSeconds", what));
    spec.selection_window_minutes = require_int(doc, "selectionWindowMinutes", what);

    const Json& devices = require(doc, "devices", what);
    if (!devices.is_array()) invalid("devices must be an array");
    for (const auto& dj : devices) {
        reject_unknown_fields(dj, {"record", "link", "resources"}, "scenario device");
        ScenarioDevice d;
        d.record = DeviceRecord::from_json(require(dj, "record", "scenario device"));
        d.link = parse_link(require(dj, "link", "scenario device"));
        d.resources = parse_resources(require(dj, "resources", "scenario device"));
        spec.devices.push_back(std::move(d));
    }

    // Cross-field invariants, each named on rejection.
    if (spec.tick_seconds < 1) invalid("tickSeconds must be >= 1");
    if (spec.selection_window_minutes < 1) invalid("selectionWindowMinutes must be >= 1");
    if (spec.collection_seconds < 3 * spec.tick_seconds)
        invalid("collectionSeconds must be >= 3*tickSeconds so every server gets >= 3 "
                "measurements");
    if (spec.selection_window_minutes * 60 != 20 * spec.tick_seconds)
        invalid("window/interval ratio must stay 20 (selectionWindowMinutes*60 == "
                "20*tickSeconds)");
    std::map<std::string, int> ids;
    for (const auto& d : spec.devices)
        if (++ids[d.record.id] > 1) invalid("duplicate device id: " + d.record.id);
    if (spec.servers().empty()) invalid("at least one edge-server device required");
    if (spec.sensors().empty()) invalid("at least one sensor device required");
    return spec;
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ContractError(ErrorCode::validation,
                            "scenario: cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

Json ScenarioReport::to_json() const {
    Json j;
    j["scenario"] = scenario;
    j["mode"] = mode;
    j["selectedServerId"] = selected_server_id;
    Json rows = Json::array();
    for (const auto& row : servers) {
        Json rj;
        rj["serverId"] = row.server_id;
        rj["meanLatencyMs"] = row.mean_latency_ms;
        rj["meanCpu"] = row.mean_cpu;
        rj["meanMem"] = row.mean_mem;
        rows.push_back(std::move(rj));
    }
    j["servers"] = std::move(rows);
    j["excludedServers"] = excluded_servers;
    j["readMeanMs"] = read_mean_ms;
    j["writeMeanMs"] = write_mean_ms;
    return j;
}

std::string ScenarioReport::dump() const { return to_json().dump(2) + "\n"; }

ScenarioReport ScenarioReport::from_json(const Json& j) {
    const char* what = "scenario report";
    ScenarioReport r;
    r.scenario = require_string(j, "scenario", what);
    r.mode = require_string(j, "mode", what);
    r.selected_server_id = require_string(j, "selectedServerId", what);
    for (const auto& row : require(j, "servers", what)) {
        ServerReportRow s;
        s.server_id = require_string(row, "serverId", what);
        s.mean_latency_ms = require_number(row, "meanLatencyMs", what);
        s.mean_cpu = require_number(row, "meanCpu", what);
        s.mean_mem = require_number(row, "meanMem", what);
        r.servers.push_back(std::move(s));
    }
    for (const auto& id : require(j, "excludedServers", what))
        r.excluded_servers.push_back(id.get<std::string>());
    r.read_mean_ms = require_number(j, "readMeanMs", what);
    r.write_mean_ms = require_number(j, "writeMeanMs", what);
    return r;
}

Expectation parse_expectation(const std::string& text) {
    Json doc = jsonio::parse(text, "expectation");
    const char* what = "expectation";
    reject_unknown_fields(doc, {"selectedServerId", "meanLatencyRangesMs"}, what);
    Expectation e;
    e.selected_server_id = require_string(doc, "selectedServerId", what);
    if (doc.contains("meanLatencyRangesMs")) {
        for (const auto& [id, range] : doc["meanLatencyRangesMs"].items()) {
            if (!range.is_array() || range.size() != 2 || !range[0].is_number() ||
                !range[1].is_number())
                throw ContractError(ErrorCode::validation,
                                    "expectation: range for " + id + " must be [lo, hi]");
            e.mean_latency_ranges_ms[id] = {range[0].get<double>(), range[1].get<double>()};
        }
    }
    return e;
}

Expectation load_expectation(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ContractError(ErrorCode::validation,
                            "expectation: cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_expectation(buf.str());
}

CompareResult compare_to_expectation(const ScenarioReport& report, const Expectation& expected) {
    CompareResult result;
    if (report.selected_server_id != expected.selected_server_id) {
        result.pass = false;
        result.diffs.push_back("selected server: expected '" + expected.selected_server_id +
                               "', got '" + report.selected_server_id + "'");
    }
    for (const auto& [id, range] : expected.mean_latency_ranges_ms) {
        const ServerReportRow* row = nullptr;
        for (const auto& r : report.servers)
            if (r.server_id == id) row = &r;
        if (!row) {
            result.pass = false;
            result.diffs.push_back("server '" + id + "' missing from report");
            continue;
        }
        if (row->mean_latency_ms < range.first || row->mean_latency_ms > range.second) {
            result.pass = false;
            std::ostringstream os;
            os << "mean latency for '" << id << "': " << row->mean_latency_ms
               << " outside [" << range.first << ", " << range.second << "]";
            result.diffs.push_back(os.str());
        }
    }
    return result;
}

}  // namespace edgeledger::sim
