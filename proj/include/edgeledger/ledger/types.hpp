#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edgeledger/digest.hpp"

namespace edgeledger::ledger {

// One key-value effect of a transaction. A delete is a tombstone write so
// replaying the log is total.
struct WriteOp {
    std::string key;
    std::string value;
    bool is_delete = false;

    bool operator==(const WriteOp&) const = default;
};

struct Transaction {
    std::string tx_id;
    std::string contract;
    std::string operation;
    std::vector<std::string> args;
    std::int64_t timestamp_ms = 0;  // assigned by the ordering step
    std::vector<WriteOp> writes;

    bool operator==(const Transaction&) const = default;
};

struct Block {
    std::uint64_t height = 0;
    Digest prev_hash{};  // all zero at height 0
    std::vector<Transaction> txs;
    Digest block_hash{};

    bool operator==(const Block&) const = default;
};

struct VerifyReport {
    bool valid = true;
    std::uint64_t first_bad_height = 0;  // meaningful only when !valid
    std::string detail;
};

}  // namespace edgeledger::ledger
