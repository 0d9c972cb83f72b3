#include "edgeledger/ledger/ledger.hpp"

#include <cinttypes>
#include <cstdio>

#include "edgeledger/log.hpp"

namespace edgeledger::ledger {

namespace {
std::int64_t wall_clock_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}
}  // namespace

Ledger::Ledger(ContractRegistry registry, LedgerOptions opts)
    : registry_(std::move(registry)), opts_(std::move(opts)) {
    if (!opts_.clock) opts_.clock = wall_clock_ms;
    if (opts_.block_max_txs == 0) opts_.block_max_txs = 1;

    bool have_log = !opts_.path.empty() && std::filesystem::exists(opts_.path) &&
                    std::filesystem::file_size(opts_.path) > 0;
    if (have_log) {
        BlockFile file = read_block_file(opts_.path);
        if (!file.intact)
            throw CodecError("block log is corrupt (" + file.error + "): " +
                             opts_.path.string());
        VerifyReport report = edgeledger::ledger::verify_chain(file.blocks);
        if (!report.valid)
            throw CodecError("block log failed verification at height " +
                             std::to_string(report.first_bad_height) + ": " + report.detail);
        blocks_ = std::move(file.blocks);
        for (const auto& b : blocks_) {
            for (const auto& tx : b.txs) state_.apply(tx.writes);
            committed_txs_ += b.txs.size();
        }
        tx_counter_ = committed_txs_;
        state_.set_height(blocks_.back().height);
    } else {
        Block genesis;
        genesis.height = 0;
        genesis.prev_hash = Digest{};
        genesis.block_hash = compute_block_hash(genesis);
        blocks_.push_back(genesis);
        if (!opts_.path.empty()) append_block_record(opts_.path, genesis);
    }

    if (opts_.auto_cut) cutter_ = std::thread([this] { cutter_loop(); });
}

Ledger::~Ledger() {
    shutdown();
    if (cutter_.joinable()) cutter_.join();
}

void Ledger::shutdown() {
    {
        std::lock_guard<std::mutex> lock(pipe_mu_);
        if (stopping_) return;
        stopping_ = true;
    }
    cutter_cv_.notify_all();
    commit_cv_.notify_all();
}

std::int64_t Ledger::now_ms() const { return opts_.clock(); }

std::string Ledger::next_tx_id() {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "tx%016" PRIx64, tx_counter_++);
    return buf;
}

Transaction Ledger::submit(const std::string& contract, const std::string& operation,
                           const std::vector<std::string>& args) {
    std::unique_lock<std::mutex> lock(pipe_mu_);
    if (stopping_) throw ContractError(ErrorCode::unavailable, "ledger is shut down");

    Transaction tx;
    tx.contract = contract;
    tx.operation = operation;
    tx.args = args;
    tx.tx_id = next_tx_id();
    tx.timestamp_ms = now_ms();

    // Execute against committed state plus the queued transactions' effects.
    // Committed state only mutates under pipe_mu_, so no state_mu_ needed.
    OverlayState view(state_, overlay_);
    TxContext ctx{tx.tx_id, tx.timestamp_ms};
    tx.writes.clear();
    registry_.execute(view, contract, operation, args, ctx, tx.writes);

    for (const auto& w : tx.writes) {
        if (w.is_delete)
            overlay_[w.key] = std::nullopt;
        else
            overlay_[w.key] = w.value;
    }
    if (queue_.empty()) first_enqueue_ = std::chrono::steady_clock::now();
    queue_.push_back(tx);
    std::uint64_t my_seq = committed_txs_ + queue_.size();

    if (queue_.size() >= opts_.block_max_txs) {
        cut_block_locked(lock);
    } else {
        cutter_cv_.notify_one();
        commit_cv_.wait(lock, [&] { return committed_txs_ >= my_seq || stopping_; });
        if (committed_txs_ < my_seq)
            throw ContractError(ErrorCode::unavailable, "ledger shut down before commit");
    }
    return tx;
}

std::string Ledger::evaluate(const std::string& contract, const std::string& operation,
                             const std::vector<std::string>& args) const {
    const OperationDef& def = registry_.find(contract, operation);
    if (!def.read_only)
        throw ContractError(ErrorCode::read_only_violation,
                            contract + "." + operation + " is not registered read-only");
    std::shared_lock<std::shared_mutex> lock(state_mu_);
    TxContext ctx{"", now_ms()};
    std::vector<WriteOp> writes;
    std::string payload = registry_.execute(state_, contract, operation, args, ctx, writes);
    return payload;
}

void Ledger::cut_block_locked(std::unique_lock<std::mutex>&) {
    if (queue_.empty()) return;

    Block b;
    {
        std::shared_lock<std::shared_mutex> slock(state_mu_);
        b.height = blocks_.back().height + 1;
        b.prev_hash = blocks_.back().block_hash;
    }
    b.txs = queue_;
    b.block_hash = compute_block_hash(b);

    if (!opts_.path.empty()) append_block_record(opts_.path, b);

    {
        std::unique_lock<std::shared_mutex> xlock(state_mu_);
        for (const auto& tx : b.txs) state_.apply(tx.writes);
        state_.set_height(b.height);
        blocks_.push_back(b);
    }
    committed_txs_ += queue_.size();
    queue_.clear();
    overlay_.clear();
    commit_cv_.notify_all();
    log::debug("cut block ", b.height, " with ", b.txs.size(), " txs");
}

std::optional<Block> Ledger::cut_block() {
    std::unique_lock<std::mutex> lock(pipe_mu_);
    if (queue_.empty()) return std::nullopt;
    cut_block_locked(lock);
    std::shared_lock<std::shared_mutex> slock(state_mu_);
    return blocks_.back();
}

void Ledger::cutter_loop() {
    std::unique_lock<std::mutex> lock(pipe_mu_);
    while (!stopping_) {
        if (queue_.empty()) {
            cutter_cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
            continue;
        }
        auto deadline = first_enqueue_ + opts_.block_timeout;
        if (cutter_cv_.wait_until(lock, deadline,
                                  [&] { return stopping_ || queue_.empty(); })) {
            continue;  // queue drained by a max-txs cut, or stopping
        }
        cut_block_locked(lock);
    }
    // Drain what is left so no committed caller is stranded.
    if (!queue_.empty()) cut_block_locked(lock);
}

std::vector<std::pair<std::string, std::string>> Ledger::range_query(
    const std::string& prefix) const {
    std::shared_lock<std::shared_mutex> lock(state_mu_);
    return state_.range(prefix);
}

VerifyReport Ledger::verify_chain() const {
    std::shared_lock<std::shared_mutex> lock(state_mu_);
    return ledger::verify_chain(blocks_);
}

std::uint64_t Ledger::height() const {
    std::shared_lock<std::shared_mutex> lock(state_mu_);
    return blocks_.back().height;
}

std::uint64_t Ledger::committed_tx_count() const {
    std::lock_guard<std::mutex> lock(pipe_mu_);
    return committed_txs_;
}

std::size_t Ledger::pending_count() const {
    std::lock_guard<std::mutex> lock(pipe_mu_);
    return queue_.size();
}

std::vector<Block> Ledger::blocks_snapshot() const {
    std::shared_lock<std::shared_mutex> lock(state_mu_);
    return blocks_;
}

WorldState Ledger::state_snapshot() const {
    std::shared_lock<std::shared_mutex> lock(state_mu_);
    return state_;
}

VerifyReport verify_chain(const std::vector<Block>& blocks) {
    VerifyReport report;
    if (blocks.empty()) {
        report.valid = false;
        report.first_bad_height = 0;
        report.detail = "empty chain (missing genesis)";
        return report;
    }
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const Block& b = blocks[i];
        if (b.height != i) {
            report.valid = false;
            report.first_bad_height = i;
            report.detail = "non-consecutive height";
            return report;
        }
        Digest expected_prev = i == 0 ? Digest{} : blocks[i - 1].block_hash;
        if (b.prev_hash != expected_prev) {
            report.valid = false;
            report.first_bad_height = i;
            report.detail = "prev hash does not link";
            return report;
        }
        if (i > 0 && b.txs.empty()) {
            report.valid = false;
            report.first_bad_height = i;
            report.detail = "empty non-genesis block";
            return report;
        }
        if (compute_block_hash(b) != b.block_hash) {
            report.valid = false;
            report.first_bad_height = i;
            report.detail = "block hash mismatch";
            return report;
        }
    }
    return report;
}

VerifyReport verify_block_file(const std::filesystem::path& path) {
    BlockFile file = read_block_file(path);
    if (!file.intact) {
        VerifyReport report;
        report.valid = false;
        report.first_bad_height = file.blocks.size();
        report.detail = file.error;
        return report;
    }
    return verify_chain(file.blocks);
}

WorldState replay_writes(const std::vector<Block>& blocks) {
    WorldState state;
    for (const auto& b : blocks) {
        for (const auto& tx : b.txs) state.apply(tx.writes);
        state.set_height(b.height);
    }
    return state;
}

WorldState replay_by_reexecution(const std::vector<Block>& blocks,
                                 const ContractRegistry& registry) {
    WorldState state;
    for (const auto& b : blocks) {
        for (const auto& tx : b.txs) {
            TxContext ctx{tx.tx_id, tx.timestamp_ms};
            std::vector<WriteOp> writes;
            registry.execute(state, tx.contract, tx.operation, tx.args, ctx, writes);
            if (writes != tx.writes)
                throw std::runtime_error("re-execution diverged at tx " + tx.tx_id);
            state.apply(writes);
        }
        state.set_height(b.height);
    }
    return state;
}

}  // namespace edgeledger::ledger
