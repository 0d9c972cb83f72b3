#include <algorithm>
#include <map>

#include "edgeledger/contracts/contracts.hpp"
#include "src/contracts/contracts_util.hpp"

namespace edgeledger::contracts {

using ledger::StateView;
using ledger::TxContext;
using ledger::WriteOp;

bool selection_less(const SelectionEntry& a, const SelectionEntry& b) {
    if (a.avg_latency_ms != b.avg_latency_ms) return a.avg_latency_ms < b.avg_latency_ms;
    if (a.avg_cpu != b.avg_cpu) return a.avg_cpu < b.avg_cpu;
    if (a.avg_memory != b.avg_memory) return a.avg_memory < b.avg_memory;
    if (a.avg_containers != b.avg_containers) return a.avg_containers < b.avg_containers;
    return a.server_id < b.server_id;  // final determinism key
}

void sort_selection_entries(std::vector<SelectionEntry>& entries) {
    std::sort(entries.begin(), entries.end(), selection_less);
}

std::vector<SelectionEntry> select_offload_server(const StateView& state,
                                                  const std::string& target_id,
                                                  const TaskProperties& task,
                                                  std::int64_t window_minutes,
                                                  std::int64_t now_ms) {
    auto target = find_device(state, target_id);
    if (!target) throw ContractError(ErrorCode::not_found, "unknown target: " + target_id);
    if (target->role != DeviceRole::sensor)
        throw ContractError(ErrorCode::validation,
                            "selection target must be a sensor: " + target_id);

    LatencyAnalysis latency = analyse_latency_to_target(state, target_id, window_minutes, now_ms);
    std::map<std::string, const LatencyAnalysisEntry*> measured;
    for (const auto& e : latency.per_server) measured[e.source_id] = &e;

    // Candidate servers, then the staleness filter: only nodes that actually
    // measured latency to the target inside the window stay in.
    std::vector<SelectionEntry> entries;
    for (const auto& server : server_list(state, task.requires_gpu)) {
        auto it = measured.find(server.id);
        if (it == measured.end()) continue;
        ResourceAnalysis resources = analyse_resources(state, server.id, window_minutes, now_ms);
        if (resources.sample_count == 0) continue;
        SelectionEntry entry;
        entry.server_id = server.id;
        entry.avg_latency_ms = it->second->avg_latency_ms;
        entry.avg_cpu = resources.avg_cpu;
        entry.avg_memory = resources.avg_memory;
        entry.avg_containers = resources.avg_containers;
        entries.push_back(std::move(entry));
    }

    if (entries.empty())
        throw ContractError(ErrorCode::no_eligible_server,
                            "no eligible edge node for target: " + target_id);
    sort_selection_entries(entries);
    return entries;
}

namespace {

std::string select_offload_server_op(const StateView& state, const std::vector<std::string>& args,
                                     const TxContext&, std::vector<WriteOp>&) {
    detail::expect_args(args, 4, "SelectOffloadServer");
    TaskProperties task =
        TaskProperties::from_json(jsonio::parse(args[1], "task properties"));
    std::int64_t window = detail::parse_window_minutes(args[2], "SelectOffloadServer");
    std::int64_t now_ms = detail::parse_int_arg(args[3], "SelectOffloadServer");

    Json out = Json::array();
    for (const auto& entry : select_offload_server(state, args[0], task, window, now_ms))
        out.push_back(entry.to_json());
    return out.dump();
}

}  // namespace

void register_selection_contract(ledger::ContractRegistry& registry) {
    registry.add(kSelectionContract, "SelectOffloadServer", true, select_offload_server_op);
}

void register_inventory_contract(ledger::ContractRegistry& registry);
void register_resources_contract(ledger::ContractRegistry& registry);
void register_latency_contract(ledger::ContractRegistry& registry);

void register_contracts(ledger::ContractRegistry& registry) {
    register_inventory_contract(registry);
    register_resources_contract(registry);
    register_latency_contract(registry);
    register_selection_contract(registry);
}

}  // namespace edgeledger::contracts
