#include "edgeledger/contracts/records.hpp"

#include <cinttypes>
#include <cstdio>

namespace edgeledger::contracts {

using jsonio::reject_unknown_fields;
using jsonio::require_bool;
using jsonio::require_int;
using jsonio::require_number;
using jsonio::require_string;

const char* role_name(DeviceRole role) {
    return role == DeviceRole::edge_server ? "edge-server" : "sensor";
}

std::optional<DeviceRole> parse_role(const std::string& name) {
    if (name == "edge-server") return DeviceRole::edge_server;
    if (name == "sensor") return DeviceRole::sensor;
    return std::nullopt;
}

Json DeviceRecord::to_json() const {
    Json j;
    j["id"] = id;
    j["name"] = name;
    j["role"] = role_name(role);
    j["hasGpu"] = has_gpu;
    j["address"] = address;
    j["credentialRef"] = credential_ref;
    j["active"] = active;
    return j;
}

DeviceRecord DeviceRecord::from_json(const Json& j) {
    const char* what = "device record";
    reject_unknown_fields(j, {"id", "name", "role", "hasGpu", "address", "credentialRef",
                              "active"},
                          what);
    DeviceRecord r;
    r.id = require_string(j, "id", what);
    r.name = require_string(j, "name", what);
    auto role = parse_role(require_string(j, "role", what));
    if (!role)
        throw ContractError(ErrorCode::validation,
                            "device record: role must be 'edge-server' or 'sensor'");
    r.role = *role;
    r.has_gpu = require_bool(j, "hasGpu", what);
    r.address = require_string(j, "address", what);
    r.credential_ref = require_string(j, "credentialRef", what);
    r.active = require_bool(j, "active", what);

    if (r.id.empty())
        throw ContractError(ErrorCode::validation, "device record: id must be non-empty");
    std::string host;
    std::uint16_t port = 0;
    if (!parse_host_port(r.address, host, port))
        throw ContractError(ErrorCode::validation,
                            "device record: address must be host:port, got '" + r.address + "'");
    return r;
}

DeviceRecord DeviceRecord::parse(const std::string& text) {
    return from_json(jsonio::parse(text, "device record"));
}

Json ResourceSample::to_json() const {
    Json j;
    j["deviceId"] = device_id;
    j["timestampMs"] = timestamp_ms;
    j["cpuPercent"] = cpu_percent;
    j["memoryPercent"] = memory_percent;
    j["containerCount"] = container_count;
    return j;
}

ResourceSample ResourceSample::from_json(const Json& j) {
    const char* what = "resource sample";
    reject_unknown_fields(
        j, {"deviceId", "timestampMs", "cpuPercent", "memoryPercent", "containerCount"}, what);
    ResourceSample s;
    s.device_id = require_string(j, "deviceId", what);
    s.timestamp_ms = require_int(j, "timestampMs", what);
    s.cpu_percent = require_number(j, "cpuPercent", what);
    s.memory_percent = require_number(j, "memoryPercent", what);
    s.container_count = require_int(j, "containerCount", what);
    return s;
}

Json LatencyRecord::to_json() const {
    Json j;
    j["sourceId"] = source_id;
    j["targetId"] = target_id;
    j["timestampMs"] = timestamp_ms;
    j["latencyMs"] = latency_ms;
    return j;
}

LatencyRecord LatencyRecord::from_json(const Json& j) {
    const char* what = "latency record";
    reject_unknown_fields(j, {"sourceId", "targetId", "timestampMs", "latencyMs"}, what);
    LatencyRecord r;
    r.source_id = require_string(j, "sourceId", what);
    r.target_id = require_string(j, "targetId", what);
    r.timestamp_ms = require_int(j, "timestampMs", what);
    r.latency_ms = require_int(j, "latencyMs", what);
    return r;
}

Json ResourceAnalysis::to_json() const {
    Json j;
    j["deviceId"] = device_id;
    j["windowMinutes"] = window_minutes;
    if (sample_count > 0) {
        j["avgCpu"] = avg_cpu;
        j["avgMemory"] = avg_memory;
        j["avgContainers"] = avg_containers;
    }
    j["sampleCount"] = sample_count;
    return j;
}

ResourceAnalysis ResourceAnalysis::from_json(const Json& j) {
    const char* what = "resource analysis";
    ResourceAnalysis a;
    a.device_id = require_string(j, "deviceId", what);
    a.window_minutes = require_int(j, "windowMinutes", what);
    a.sample_count = require_int(j, "sampleCount", what);
    if (a.sample_count > 0) {
        a.avg_cpu = require_number(j, "avgCpu", what);
        a.avg_memory = require_number(j, "avgMemory", what);
        a.avg_containers = require_number(j, "avgContainers", what);
    }
    return a;
}

Json LatencyAnalysis::to_json() const {
    Json j;
    j["targetId"] = target_id;
    j["windowMinutes"] = window_minutes;
    Json servers = Json::array();
    for (const auto& e : per_server) {
        Json row;
        row["sourceId"] = e.source_id;
        row["avgLatencyMs"] = e.avg_latency_ms;
        row["sampleCount"] = e.sample_count;
        servers.push_back(std::move(row));
    }
    j["perServer"] = std::move(servers);
    return j;
}

LatencyAnalysis LatencyAnalysis::from_json(const Json& j) {
    const char* what = "latency analysis";
    LatencyAnalysis a;
    a.target_id = require_string(j, "targetId", what);
    a.window_minutes = require_int(j, "windowMinutes", what);
    for (const auto& row : jsonio::require(j, "perServer", what)) {
        LatencyAnalysisEntry e;
        e.source_id = require_string(row, "sourceId", what);
        e.avg_latency_ms = require_number(row, "avgLatencyMs", what);
        e.sample_count = require_int(row, "sampleCount", what);
        a.per_server.push_back(std::move(e));
    }
    return a;
}

Json TaskProperties::to_json() const {
    Json j;
    j["requiresGpu"] = requires_gpu;
    j["label"] = label;
    return j;
}

TaskProperties TaskProperties::from_json(const Json& j) {
    const char* what = "task properties";
    reject_unknown_fields(j, {"requiresGpu", "label"}, what);
    TaskProperties t;
    t.requires_gpu = require_bool(j, "requiresGpu", what);
    if (j.contains("label")) t.label = require_string(j, "label", what);
    return t;
}

Json SelectionEntry::to_json() const {
    Json j;
    j["serverId"] = server_id;
    j["avgLatencyMs"] = avg_latency_ms;
    j["avgCpu"] = avg_cpu;
    j["avgMemory"] = avg_memory;
    j["avgContainers"] = avg_containers;
    return j;
}

SelectionEntry SelectionEntry::from_json(const Json& j) {
    const char* what = "selection entry";
    SelectionEntry e;
    e.server_id = require_string(j, "serverId", what);
    e.avg_latency_ms = require_number(j, "avgLatencyMs", what);
    e.avg_cpu = require_number(j, "avgCpu", what);
    e.avg_memory = require_number(j, "avgMemory", what);
    e.avg_containers = require_number(j, "avgContainers", what);
    return e;
}

std::string device_key(const std::string& id) { return "device:" + id; }

namespace {
std::string padded_ts(std::int64_t timestamp_ms) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%020" PRId64, timestamp_ms);
    return buf;
}
}  // namespace

std::string resource_key(const std::string& device_id, std::int64_t timestamp_ms,
                         const std::string& tx_id) {
    return "resource:" + device_id + ":" + padded_ts(timestamp_ms) + ":" + tx_id;
}

std::string latency_key(const std::string& target_id, const std::string& source_id,
                        std::int64_t timestamp_ms, const std::string& tx_id) {
    return "latency:" + target_id + ":" + source_id + ":" + padded_ts(timestamp_ms) + ":" + tx_id;
}

bool parse_host_port(const std::string& address, std::string& host, std::uint16_t& port) {
    auto pos = address.rfind(':');
    if (pos == std::string::npos || pos == 0 || pos + 1 == address.size()) return false;
    host = address.substr(0, pos);
    std::string port_str = address.substr(pos + 1);
    std::uint32_t value = 0;
    for (char c : port_str) {
        if (c < '0' || c > '9') return false;
        value = value * 10 + static_cast<std::uint32_t>(c - '0');
        if (value > 65535) return false;
    }
    port = static_cast<std::uint16_t>(value);
    return true;
}

}  // namespace edgeledger::contracts
