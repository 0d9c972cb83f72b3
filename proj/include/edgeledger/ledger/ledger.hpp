#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <thread>
#include <vector>

#include "edgeledger/ledger/codec.hpp"
#include "edgeledger/ledger/contract_registry.hpp"
#include "edgeledger/ledger/types.hpp"
#include "edgeledger/ledger/world_state.hpp"

namespace edgeledger::ledger {

struct LedgerOptions {
    // Block log file. Empty keeps the chain in memory only.
    std::filesystem::path path;
    // Cut when this many transactions are queued...
    std::size_t block_max_txs = 10;
    // ...or when this much time passed since the first queued transaction.
    std::chrono::milliseconds block_timeout{500};
    // Run the background cutter thread. Tests that drive cut_block() by hand
    // or use block_max_txs == 1 can disable it.
    bool auto_cut = true;
    // Ordering-step clock (wall milliseconds). Overridable for virtual time.
    std::function<std::int64_t()> clock;
};

// Minimal permissioned ledger: deterministic contract execution against a
// key-value world state, batched into hash-chained blocks.
//
// Submits and commits serialize on a single pipeline mutex (execute-order-
// commit, one logical executor). Evaluations read the committed state under
// a shared lock and may run concurrently with each other.
class Ledger {
  public:
    Ledger(ContractRegistry registry, LedgerOptions opts);
    ~Ledger();

    Ledger(const Ledger&) = delete;
    Ledger& operator=(const Ledger&) = delete;

    // Executes, queues, and blocks until the transaction's block commits.
    // Throws ContractError on validation failure; no state change then.
    Transaction submit(const std::string& contract, const std::string& operation,
                       const std::vector<std::string>& args);

    // Runs a read-only operation against the committed state. No writes, no
    // block.
    std::string evaluate(const std::string& contract, const std::string& operation,
                         const std::vector<std::string>& args) const;

    // Cuts the pending queue into a block immediately. No-op on an empty
    // queue (returns nullopt).
    std::optional<Block> cut_block();

    // Committed entries whose key starts with the prefix, key-sorted.
    std::vector<std::pair<std::string, std::string>> range_query(const std::string& prefix) const;

    VerifyReport verify_chain() const;

    std::uint64_t height() const;
    std::uint64_t committed_tx_count() const;
    std::size_t pending_count() const;
    std::vector<Block> blocks_snapshot() const;
    WorldState state_snapshot() const;

    // Rejects new submits and wakes waiters with ledger-unavailable.
    void shutdown();

    const LedgerOptions& options() const { return opts_; }

  private:
    std::int64_t now_ms() const;
    std::string next_tx_id();
    // Requires pipe_mu_ held.
    void cut_block_locked(std::unique_lock<std::mutex>& pipeline_lock);
    void cutter_loop();

    ContractRegistry registry_;
    LedgerOptions opts_;

    mutable std::mutex pipe_mu_;  // queue, overlay, commit sequencing
    std::condition_variable commit_cv_;
    std::condition_variable cutter_cv_;
    std::vector<Transaction> queue_;
    std::map<std::string, std::optional<std::string>> overlay_;
    std::chrono::steady_clock::time_point first_enqueue_{};
    std::uint64_t tx_counter_ = 0;        // total txs ever executed (ids)
    std::uint64_t committed_txs_ = 0;     // total txs committed to blocks
    bool stopping_ = false;

    mutable std::shared_mutex state_mu_;  // committed state + chain
    WorldState state_;
    std::vector<Block> blocks_;

    std::thread cutter_;
};

// Chain validation usable on any block sequence (in memory or from a file).
VerifyReport verify_chain(const std::vector<Block>& blocks);
VerifyReport verify_block_file(const std::filesystem::path& path);

// Replays a block log onto an empty state by re-executing every transaction
// through the registry with its recorded ordering identity, checking that
// the produced writes match the recorded ones. Used as the determinism
// oracle; throws on divergence.
WorldState replay_by_reexecution(const std::vector<Block>& blocks,
                                 const ContractRegistry& registry);

// Replays recorded writes only (the startup path).
WorldState replay_writes(const std::vector<Block>& blocks);

}  // namespace edgeledger::ledger
