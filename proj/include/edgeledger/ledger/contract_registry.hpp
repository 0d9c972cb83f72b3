#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "edgeledger/errors.hpp"
#include "edgeledger/ledger/types.hpp"
#include "edgeledger/ledger/world_state.hpp"

namespace edgeledger::ledger {

// Ordering-step identity of the executing transaction. Handlers that write
// history keys embed both fields, which keeps re-execution deterministic.
struct TxContext {
    std::string tx_id;
    std::int64_t timestamp_ms = 0;
};

// A handler reads the supplied state view, may append writes, and returns a
// payload. Handlers must be pure functions of (state, args, ctx).
using Handler = std::function<std::string(const StateView&, const std::vector<std::string>&,
                                          const TxContext&, std::vector<WriteOp>&)>;

struct OperationDef {
    Handler fn;
    bool read_only = false;
};

class ContractRegistry {
  public:
    void add(const std::string& contract, const std::string& operation, bool read_only,
             Handler fn);

    // Throws ContractError(unknown_operation) when missing.
    const OperationDef& find(const std::string& contract, const std::string& operation) const;

    // Runs the handler and enforces the read/write split: read-only
    // operations that attempt a write fail with read_only_violation.
    std::string execute(const StateView& state, const std::string& contract,
                        const std::string& operation, const std::vector<std::string>& args,
                        const TxContext& ctx, std::vector<WriteOp>& writes) const;

  private:
    std::map<std::string, std::map<std::string, OperationDef>> contracts_;
};

}  // namespace edgeledger::ledger
