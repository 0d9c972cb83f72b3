#pragma once

#include <cstdint>
#include <mutex>

#include "edgeledger/jsonio.hpp"

namespace edgeledger::gateway {

enum class OpKind { read, write };

struct OpTimingSnapshot {
    std::uint64_t read_count = 0;
    double read_mean_ms = 0.0;
    std::uint64_t write_count = 0;
    double write_mean_ms = 0.0;
};

// Running means over completed requests since startup (accumulate then
// divide). Means are absent from the JSON while the count is zero.
class TimingStats {
  public:
    void record(OpKind kind, double elapsed_ms);
    OpTimingSnapshot snapshot() const;
    jsonio::Json to_json() const;

  private:
    mutable std::mutex mu_;
    std::uint64_t read_count_ = 0;
    double read_sum_ms_ = 0.0;
    std::uint64_t write_count_ = 0;
    double write_sum_ms_ = 0.0;
};

}  // namespace edgeledger::gateway
