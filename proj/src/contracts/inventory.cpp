#include "edgeledger/contracts/contracts.hpp"
#include "src/contracts/contracts_util.hpp"

namespace edgeledger::contracts {

using ledger::StateView;
using ledger::TxContext;
using ledger::WriteOp;

namespace {

std::vector<DeviceRecord> list_devices(const StateView& state) {
    std::vector<DeviceRecord> out;
    for (const auto& [key, value] : state.range("device:"))
        out.push_back(DeviceRecord::parse(value));
    return out;  // key order == id order
}

std::string create_device(const StateView& state, const std::vector<std::string>& args,
                          const TxContext&, std::vector<WriteOp>& writes) {
    detail::expect_args(args, 1, "CreateDevice");
    DeviceRecord record = DeviceRecord::parse(args[0]);
    std::string key = device_key(record.id);
    if (state.get(key))
        throw ContractError(ErrorCode::duplicate, "device already exists: " + record.id);
    writes.push_back({key, record.to_json().dump(), false});
    return record.id;
}

std::string read_device(const StateView& state, const std::vector<std::string>& args,
                        const TxContext&, std::vector<WriteOp>&) {
    detail::expect_args(args, 1, "ReadDevice");
    auto value = state.get(device_key(args[0]));
    if (!value) throw ContractError(ErrorCode::not_found, "device not found: " + args[0]);
    return *value;
}

std::string update_device(const StateView& state, const std::vector<std::string>& args,
                          const TxContext&, std::vector<WriteOp>& writes) {
    detail::expect_args(args, 1, "UpdateDevice");
    DeviceRecord record = DeviceRecord::parse(args[0]);
    std::string key = device_key(record.id);
    if (!state.get(key))
        throw ContractError(ErrorCode::not_found, "device not found: " + record.id);
    writes.push_back({key, record.to_json().dump(), false});
    return record.id;
}

std::string delete_device(const StateView& state, const std::vector<std::string>& args,
                          const TxContext&, std::vector<WriteOp>& writes) {
    detail::expect_args(args, 1, "DeleteDevice");
    std::string key = device_key(args[0]);
    if (!state.get(key)) throw ContractError(ErrorCode::not_found, "device not found: " + args[0]);
    writes.push_back({key, "", true});
    return args[0];
}

std::string server_list_payload(const StateView& state, bool gpu_only) {
    Json out = Json::array();
    for (const auto& record : server_list(state, gpu_only)) out.push_back(record.to_json());
    return out.dump();
}

}  // namespace

std::optional<DeviceRecord> find_device(const StateView& state, const std::string& id) {
    auto value = state.get(device_key(id));
    if (!value) return std::nullopt;
    return DeviceRecord::parse(*value);
}

std::vector<DeviceRecord> server_list(const StateView& state, bool gpu_only) {
    std::vector<DeviceRecord> out;
    for (auto& record : list_devices(state)) {
        if (record.role != DeviceRole::edge_server || !record.active) continue;
        if (gpu_only && !record.has_gpu) continue;
        out.push_back(std::move(record));
    }
    return out;
}

std::vector<DeviceRecord> sensor_list(const StateView& state) {
    std::vector<DeviceRecord> out;
    for (auto& record : list_devices(state)) {
        if (record.role != DeviceRole::sensor || !record.active) continue;
        out.push_back(std::move(record));
    }
    return out;
}

void register_inventory_contract(ledger::ContractRegistry& registry) {
    registry.add(kInventoryContract, "CreateDevice", false, create_device);
    registry.add(kInventoryContract, "ReadDevice", true, read_device);
    registry.add(kInventoryContract, "UpdateDevice", false, update_device);
    registry.add(kInventoryContract, "DeleteDevice", false, delete_device);
    registry.add(kInventoryContract, "GetServerList", true,
                 [](const StateView& state, const std::vector<std::string>& args, const TxContext&,
                    std::vector<WriteOp>&) {
                     detail::expect_args(args, 0, "GetServerList");
                     return server_list_payload(state, false);
                 });
    registry.add(kInventoryContract, "GetServerListGPU", true,
                 [](const StateView& state, const std::vector<std::string>& args, const TxContext&,
                    std::vector<WriteOp>&) {
                     detail::expect_args(args, 0, "GetServerListGPU");
                     return server_list_payload(state, true);
                 });
}

}  // namespace edgeledger::contracts
