#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "edgeledger/jsonio.hpp"

namespace edgeledger::contracts {

using jsonio::Json;

enum class DeviceRole { edge_server, sensor };

const char* role_name(DeviceRole role);
std::optional<DeviceRole> parse_role(const std::string& name);

// The inventory asset. credential_ref names an out-of-ledger credential; the
// ledger never stores the secret itself.
struct DeviceRecord {
    std::string id;
    std::string name;
    DeviceRole role = DeviceRole::sensor;
    bool has_gpu = false;
    std::string address;  // host:port
    std::string credential_ref;
    bool active = true;

    Json to_json() const;
    static DeviceRecord from_json(const Json& j);
    static DeviceRecord parse(const std::string& text);
};

struct ResourceSample {
    std::string device_id;
    std::int64_t timestamp_ms = 0;  // ordering-step milliseconds
    double cpu_percent = 0.0;
    double memory_percent = 0.0;
    std::int64_t container_count = 0;

    Json to_json() const;
    static ResourceSample from_json(const Json& j);
};

struct LatencyRecord {
    std::string source_id;  // server
    std::string target_id;  // sensor
    std::int64_t timestamp_ms = 0;
    std::int64_t latency_ms = 0;  // >= 0, or -1 for a failed probe

    Json to_json() const;
    static LatencyRecord from_json(const Json& j);
};

struct ResourceAnalysis {
    std::string device_id;
    std::int64_t window_minutes = 0;
    double avg_cpu = 0.0;
    double avg_memory = 0.0;
    double avg_containers = 0.0;
    std::int64_t sample_count = 0;  // averages meaningful only when > 0

    Json to_json() const;
    static ResourceAnalysis from_json(const Json& j);
};

struct LatencyAnalysisEntry {
    std::string source_id;
    double avg_latency_ms = 0.0;
    std::int64_t sample_count = 0;
};

struct LatencyAnalysis {
    std::string target_id;
    std::int64_t window_minutes = 0;
    std::vector<LatencyAnalysisEntry> per_server;

    Json to_json() const;
    static LatencyAnalysis from_json(const Json& j);
};

struct TaskProperties {
    bool requires_gpu = false;
    std::string label;

    Json to_json() const;
    static TaskProperties from_json(const Json& j);
};

// Merged per-server row the selection sorts.
struct SelectionEntry {
    std::string server_id;
    double avg_latency_ms = 0.0;
    double avg_cpu = 0.0;
    double avg_memory = 0.0;
    double avg_containers = 0.0;

    Json to_json() const;
    static SelectionEntry from_json(const Json& j);
};

// World-state key builders (bit-exact schema).
std::string device_key(const std::string& id);
std::string resource_key(const std::string& device_id, std::int64_t timestamp_ms,
                         const std::string& tx_id);
std::string latency_key(const std::string& target_id, const std::string& source_id,
                        std::int64_t timestamp_ms, const std::string& tx_id);

// host:port with a numeric port in [0, 65535] and a non-empty host.
bool parse_host_port(const std::string& address, std::string& host, std::uint16_t& port);

}  // namespace edgeledger::contracts
