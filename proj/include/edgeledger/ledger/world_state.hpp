#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "edgeledger/ledger/types.hpp"

namespace edgeledger::ledger {

// Read surface the contracts see. Implemented by the committed state and by
// the speculative overlay used while a block is being assembled.
class StateView {
  public:
    virtual ~StateView() = default;
    virtual std::optional<std::string> get(const std::string& key) const = 0;
    virtual std::vector<std::pair<std::string, std::string>> range(
        const std::string& prefix) const = 0;
};

// Materialized key-value view of the committed chain. std::map keeps keys in
// bytewise order, which is exactly the rangeQuery contract.
class WorldState : public StateView {
  public:
    std::optional<std::string> get(const std::string& key) const override;
    std::vector<std::pair<std::string, std::string>> range(
        const std::string& prefix) const override;

    void apply(const std::vector<WriteOp>& writes);

    std::uint64_t height() const { return height_; }
    void set_height(std::uint64_t h) { height_ = h; }
    std::size_t size() const { return entries_.size(); }
    const std::map<std::string, std::string>& entries() const { return entries_; }

    bool operator==(const WorldState& other) const { return entries_ == other.entries_; }

  private:
    std::map<std::string, std::string> entries_;
    std::uint64_t height_ = 0;
};

// Base state plus the uncommitted writes of queued transactions, so each
// queued transaction executes against the effects of its predecessors.
class OverlayState : public StateView {
  public:
    OverlayState(const StateView& base,
                 const std::map<std::string, std::optional<std::string>>& overlay)
        : base_(base), overlay_(overlay) {}

    std::optional<std::string> get(const std::string& key) const override;
    std::vector<std::pair<std::string, std::string>> range(
        const std::string& prefix) const override;

  private:
    const StateView& base_;
    const std::map<std::string, std::optional<std::string>>& overlay_;
};

}  // namespace edgeledger::ledger
