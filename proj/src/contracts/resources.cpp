#include "edgeledger/contracts/contracts.hpp"
#include "src/contracts/contracts_util.hpp"

namespace edgeledger::contracts {

using ledger::StateView;
using ledger::TxContext;
using ledger::WriteOp;

namespace {

// Write payload carries no timestamp; the ordering step stamps the record.
std::string put_resource_sample(const StateView& state, const std::vector<std::string>& args,
                                const TxContext& ctx, std::vector<WriteOp>& writes) {
    detail::expect_args(args, 1, "PutResourceSample");
    const char* what = "resource sample";
    Json j = jsonio::parse(args[0], what);
    jsonio::reject_unknown_fields(j, {"deviceId", "cpuPercent", "memoryPercent", "containerCount"},
                                  what);
    ResourceSample sample;
    sample.device_id = jsonio::require_string(j, "deviceId", what);
    sample.cpu_percent = jsonio::require_number(j, "cpuPercent", what);
    sample.memory_percent = jsonio::require_number(j, "memoryPercent", what);
    sample.container_count = jsonio::require_int(j, "containerCount", what);
    sample.timestamp_ms = ctx.timestamp_ms;

    if (!state.get(device_key(sample.device_id)))
        throw ContractError(ErrorCode::not_found, "unknown device: " + sample.device_id);
    if (sample.cpu_percent < 0.0 || sample.cpu_percent > 100.0)
        throw ContractError(ErrorCode::validation, "cpuPercent out of range [0,100]");
    if (sample.memory_percent < 0.0 || sample.memory_percent > 100.0)
        throw ContractError(ErrorCode::validation, "memoryPercent out of range [0,100]");
    if (sample.container_count < 0)
        throw ContractError(ErrorCode::validation, "containerCount must be >= 0");

    std::string key = resource_key(sample.device_id, sample.timestamp_ms, ctx.tx_id);
    writes.push_back({key, sample.to_json().dump(), false});
    return key;
}

std::string analyse_resources_op(const StateView& state, const std::vector<std::string>& args,
                                 const TxContext&, std::vector<WriteOp>&) {
    detail::expect_args(args, 3, "AnalyseResources");
    std::int64_t window = detail::parse_window_minutes(args[1], "AnalyseResources");
    std::int64_t now_ms = detail::parse_int_arg(args[2], "AnalyseResources");
    return analyse_resources(state, args[0], window, now_ms).to_json().dump();
}

}  // namespace

ResourceAnalysis analyse_resources(const StateView& state, const std::string& device_id,
                                   std::int64_t window_minutes, std::int64_t now_ms) {
    if (!state.get(device_key(device_id)))
        throw ContractError(ErrorCode::not_found, "unknown device: " + device_id);

    std::int64_t start = detail::window_start(now_ms, window_minutes);
    double cpu_sum = 0.0, mem_sum = 0.0, containers_sum = 0.0;
    std::int64_t count = 0;
    for (const auto& [key, value] : state.range("resource:" + device_id + ":")) {
        ResourceSample sample = ResourceSample::from_json(jsonio::parse(value, "stored sample"));
        if (sample.timestamp_ms < start || sample.timestamp_ms > now_ms) continue;
        cpu_sum += sample.cpu_percent;
        mem_sum += sample.memory_percent;
        containers_sum += static_cast<double>(sample.container_count);
        ++count;
    }

    ResourceAnalysis analysis;
    analysis.device_id = device_id;
    analysis.window_minutes = window_minutes;
    analysis.sample_count = count;
    if (count > 0) {
        analysis.avg_cpu = cpu_sum / static_cast<double>(count);
        analysis.avg_memory = mem_sum / static_cast<double>(count);
        analysis.avg_containers = containers_sum / static_cast<double>(count);
    }
    return analysis;
}

void register_resources_contract(ledger::ContractRegistry& registry) {
    registry.add(kResourcesContract, "PutResourceSample", false, put_resource_sample);
    registry.add(kResourcesContract, "AnalyseResources", true, analyse_resources_op);
}

}  // namespace edgeledger::contracts
