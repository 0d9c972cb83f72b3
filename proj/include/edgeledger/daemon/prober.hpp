#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace edgeledger::daemon {

struct ProbeTarget {
    std::string target_id;
    std::string address;  // host:port
    std::string credential_ref;
};

struct ProbeResult {
    std::string target_id;
    std::int64_t latency_ms = -1;  // >= 0, or -1 for any failure
};

// One probe is a fresh authenticated connect + echo + verify round trip; its
// wall-clock duration is the measurement, so connection setup cost counts.
class Prober {
  public:
    explicit Prober(int timeout_ms = 5000, int max_concurrency = 16);

    // Always returns exactly one result per target, in input order. Failures
    // of any kind (bad address, refused, wrong credential, wrong payload,
    // timeout) become the -1 sentinel; nothing escapes.
    std::vector<ProbeResult> measure(const std::vector<ProbeTarget>& targets) const;

    // Single probe; exposed for tests.
    std::int64_t probe_once(const ProbeTarget& target) const;

  private:
    int timeout_ms_;
    int max_concurrency_;
};

}  // namespace edgeledger::daemon
