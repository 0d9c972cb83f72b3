#include <set>

#include "edgeledger/contracts/contracts.hpp"
#include "src/contracts/contracts_util.hpp"

namespace edgeledger::contracts {

using ledger::StateView;
using ledger::TxContext;
using ledger::WriteOp;

namespace {

// Batch is atomic: any invalid record rejects the whole transaction before a
// single write is queued.
std::string put_latency_measurements(const StateView& state, const std::vector<std::string>& args,
                                     const TxContext& ctx, std::vector<WriteOp>& writes) {
    detail::expect_args(args, 1, "PutLatencyMeasurements");
    const char* what = "latency batch";
    Json batch = jsonio::parse(args[0], what);
    if (!batch.is_array())
        throw ContractError(ErrorCode::validation, std::string(what) + ": expected an array");

    std::vector<LatencyRecord> records;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& item : batch) {
        jsonio::reject_unknown_fields(item, {"sourceId", "targetId", "latencyMs"}, what);
        LatencyRecord r;
        r.source_id = jsonio::require_string(item, "sourceId", what);
        r.target_id = jsonio::require_string(item, "targetId", what);
        r.latency_ms = jsonio::require_int(item, "latencyMs", what);
        r.timestamp_ms = ctx.timestamp_ms;

        if (r.latency_ms < -1)
            throw ContractError(ErrorCode::validation,
                                "latencyMs must be >= 0 or the failure sentinel -1");
        auto source = find_device(state, r.source_id);
        if (!source) throw ContractError(ErrorCode::not_found, "unknown source: " + r.source_id);
        if (source->role != DeviceRole::edge_server)
            throw ContractError(ErrorCode::validation,
                                "source is not an edge-server: " + r.source_id);
        auto target = find_device(state, r.target_id);
        if (!target) throw ContractError(ErrorCode::not_found, "unknown target: " + r.target_id);
        if (target->role != DeviceRole::sensor)
            throw ContractError(ErrorCode::validation, "target is not a sensor: " + r.target_id);
        // One transaction shares (timestamp, txId); a repeated pair would
        // collide on the history key and overwrite.
        if (!seen.emplace(r.source_id, r.target_id).second)
            throw ContractError(ErrorCode::validation,
                                "duplicate (source,target) pair in batch: " + r.source_id + "->" +
                                    r.target_id);
        records.push_back(std::move(r));
    }

    for (const auto& r : records) {
        std::string key = latency_key(r.target_id, r.source_id, r.timestamp_ms, ctx.tx_id);
        writes.push_back({key, r.to_json().dump(), false});
    }
    return std::to_string(records.size());
}

std::string analyse_latency_op(const StateView& state, const std::vector<std::string>& args,
                               const TxContext&, std::vector<WriteOp>&) {
    detail::expect_args(args, 3, "AnalyseLatencyToTarget");
    std::int64_t window = detail::parse_window_minutes(args[1], "AnalyseLatencyToTarget");
    std::int64_t now_ms = detail::parse_int_arg(args[2], "AnalyseLatencyToTarget");
    return analyse_latency_to_target(state, args[0], window, now_ms).to_json().dump();
}

}  // namespace

LatencyAnalysis analyse_latency_to_target(const StateView& state, const std::string& target_id,
                                          std::int64_t window_minutes, std::int64_t now_ms) {
    if (!state.get(device_key(target_id)))
        throw ContractError(ErrorCode::not_found, "unknown target: " + target_id);

    std::int64_t start = detail::window_start(now_ms, window_minutes);
    // Keys are "latency:{target}:{source}:..." so the scan arrives grouped by
    // source in ascending id order.
    std::map<std::string, std::pair<double, std::int64_t>> sums;
    for (const auto& [key, value] : state.range("latency:" + target_id + ":")) {
        LatencyRecord r = LatencyRecord::from_json(jsonio::parse(value, "stored latency"));
        if (r.timestamp_ms < start || r.timestamp_ms > now_ms) continue;
        if (r.latency_ms < 0) continue;  // failed probes never enter averages
        auto& [sum, count] = sums[r.source_id];
        sum += static_cast<double>(r.latency_ms);
        count += 1;
    }

    LatencyAnalysis analysis;
    analysis.target_id = target_id;
    analysis.window_minutes = window_minutes;
    for (const auto& [source, sc] : sums) {
        analysis.per_server.push_back(
            {source, sc.first / static_cast<double>(sc.second), sc.second});
    }
    return analysis;
}

void register_latency_contract(ledger::ContractRegistry& registry) {
    registry.add(kLatencyContract, "PutLatencyMeasurements", false, put_latency_measurements);
    registry.add(kLatencyContract, "AnalyseLatencyToTarget", true, analyse_latency_op);
}

}  // namespace edgeledger::contracts
