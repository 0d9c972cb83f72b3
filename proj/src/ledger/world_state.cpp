#include "edgeledger/ledger/world_state.hpp"

namespace edgeledger::ledger {

namespace {
bool starts_with(const std::string& s, const std::string& prefix) {
    return s.compare(0, prefix.size(), prefix) == 0;
}
}  // namespace

std::optional<std::string> WorldState::get(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::pair<std::string, std::string>> WorldState::range(
    const std::string& prefix) const {
    std::vector<std::pair<std::string, std::string>> out;
    for (auto it = entries_.lower_bound(prefix); it != entries_.end(); ++it) {
        if (!starts_with(it->first, prefix)) break;
        out.emplace_back(it->first, it->second);
    }
    return out;
}

void WorldState::apply(const std::vector<WriteOp>& writes) {
    for (const auto& w : writes) {
        if (w.is_delete)
            entries_.erase(w.key);
        else
            entries_[w.key] = w.value;
    }
}

std::optional<std::string> OverlayState::get(const std::string& key) const {
    auto it = overlay_.find(key);
    if (it != overlay_.end()) return it->second;  // nullopt == tombstone
    return base_.get(key);
}

std::vector<std::pair<std::string, std::string>> OverlayState::range(
    const std::string& prefix) const {
    std::map<std::string, std::string> merged;
    for (auto& kv : base_.range(prefix)) merged.insert(std::move(kv));
    for (auto it = overlay_.lower_bound(prefix); it != overlay_.end(); ++it) {
        if (it->first.compare(0, prefix.size(), prefix) != 0) break;
        if (it->second)
            merged[it->first] = *it->second;
        else
            merged.erase(it->first);
    }
    return {merged.begin(), merged.end()};
}

}  // namespace edgeledger::ledger
