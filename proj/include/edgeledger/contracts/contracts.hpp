#pragma once

#include <optional>
#include <string>
#include <vector>

#include "edgeledger/contracts/records.hpp"
#include "edgeledger/ledger/contract_registry.hpp"

namespace edgeledger::contracts {

// Contract and operation names as registered on the ledger.
inline constexpr const char* kInventoryContract = "inventory";
inline constexpr const char* kResourcesContract = "resources";
inline constexpr const char* kLatencyContract = "latency";
inline constexpr const char* kSelectionContract = "selection";

// Registers the four contracts:
//   inventory: CreateDevice, ReadDevice, UpdateDevice, DeleteDevice,
//              GetServerList, GetServerListGPU
//   resources: PutResourceSample, AnalyseResources
//   latency:   PutLatencyMeasurements, AnalyseLatencyToTarget
//   selection: SelectOffloadServer
void register_contracts(ledger::ContractRegistry& registry);

// Shared read helpers. These are the same pure functions the registered
// handlers run; the gateway and the selection contract reuse them directly.
std::optional<DeviceRecord> find_device(const ledger::StateView& state, const std::string& id);
std::vector<DeviceRecord> server_list(const ledger::StateView& state, bool gpu_only);
std::vector<DeviceRecord> sensor_list(const ledger::StateView& state);

// Means over samples with timestamp in [now - window*60000, now], both ends
// closed.
ResourceAnalysis analyse_resources(const ledger::StateView& state, const std::string& device_id,
                                   std::int64_t window_minutes, std::int64_t now_ms);
LatencyAnalysis analyse_latency_to_target(const ledger::StateView& state,
                                          const std::string& target_id,
                                          std::int64_t window_minutes, std::int64_t now_ms);

std::vector<SelectionEntry> select_offload_server(const ledger::StateView& state,
                                                  const std::string& target_id,
                                                  const TaskProperties& task,
                                                  std::int64_t window_minutes,
                                                  std::int64_t now_ms);

// Ascending (latency, cpu, memory, containers, id); exact float compares.
bool selection_less(const SelectionEntry& a, const SelectionEntry& b);
void sort_selection_entries(std::vector<SelectionEntry>& entries);

}  // namespace edgeledger::contracts
