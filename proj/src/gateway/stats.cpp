#include "edgeledger/gateway/stats.hpp"

#include <stdexcept>

namespace edgeledger::gateway {

void TimingStats::record(OpKind kind, double elapsed_ms) {
    if (elapsed_ms < 0.0) throw std::invalid_argument("elapsed_ms must be >= 0");
    std::lock_guard<std::mutex> lock(mu_);
    if (kind == OpKind::read) {
        ++read_count_;
        read_sum_ms_ += elapsed_ms;
    } else {
        ++write_count_;
        write_sum_ms_ += elapsed_ms;
    }
}

OpTimingSnapshot TimingStats::snapshot() const {
    std::lock_guard<std::mutex> lock(mu_);
    OpTimingSnapshot s;
    s.read_count = read_count_;
    s.write_count = write_count_;
    if (read_count_ > 0) s.read_mean_ms = read_sum_ms_ / static_cast<double>(read_count_);
    if (write_count_ > 0) s.write_mean_ms = write_sum_ms_ / static_cast<double>(write_count_);
    return s;
}

jsonio::Json TimingStats::to_json() const {
    OpTimingSnapshot s = snapshot();
    jsonio::Json j;
    j["readCount"] = s.read_count;
    if (s.read_count > 0) j["readMeanMs"] = s.read_mean_ms;
    j["writeCount"] = s.write_count;
    if (s.write_count > 0) j["writeMeanMs"] = s.write_mean_ms;
    return j;
}

}  // namespace edgeledger::gateway
