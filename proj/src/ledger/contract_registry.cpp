#include "edgeledger/ledger/contract_registry.hpp"

namespace edgeledger::ledger {

void ContractRegistry::add(const std::string& contract, const std::string& operation,
                           bool read_only, Handler fn) {
    contracts_[contract][operation] = OperationDef{std::move(fn), read_only};
}

const OperationDef& ContractRegistry::find(const std::string& contract,
                                           const std::string& operation) const {
    auto c = contracts_.find(contract);
    if (c == contracts_.end())
        throw ContractError(ErrorCode::unknown_operation, "unknown contract: " + contract);
    auto op = c->second.find(operation);
    if (op == c->second.end())
        throw ContractError(ErrorCode::unknown_operation,
                            "unknown operation: " + contract + "." + operation);
    return op->second;
}

std::string ContractRegistry::execute(const StateView& state, const std::string& contract,
                                      const std::string& operation,
                                      const std::vector<std::string>& args, const TxContext& ctx,
                                      std::vector<WriteOp>& writes) const {
    const OperationDef& def = find(contract, operation);
    std::string payload = def.fn(state, args, ctx, writes);
    if (def.read_only && !writes.empty())
        throw ContractError(ErrorCode::read_only_violation,
                            contract + "." + operation + " is read-only but attempted a write");
    return payload;
}

}  // namespace edgeledger::ledger
