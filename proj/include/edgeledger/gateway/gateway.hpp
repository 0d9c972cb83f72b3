#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "edgeledger/gateway/stats.hpp"
#include "edgeledger/ledger/ledger.hpp"

namespace edgeledger::gateway {

struct GatewayConfig {
    std::string listen_host = "127.0.0.1";
    std::uint16_t port = 8080;  // 0 picks a free port
    std::filesystem::path ledger_path;
    std::size_t block_max_txs = 10;
    int block_timeout_ms = 500;
    // Each successful select POSTs the head entry to every URL, at most once
    // per call; delivery failure never fails the select.
    std::vector<std::string> notify_urls;
    int default_window_minutes = 10;
    // Link-emulation hook: per-source probe target address overrides,
    // source id -> (target id -> address). Empty in production.
    std::map<std::string, std::map<std::string, std::string>> target_overrides;
    // Clock used for select's nowMs and the ledger ordering step.
    std::function<std::int64_t()> clock;
};

// The REST face of the ledger: devices, samples, latency batches, selection,
// probe-target distribution, and operation timing stats. Writes go through
// submitTransaction (block-commit latency included in the response time),
// reads through evaluateTransaction.
class Gateway {
  public:
    explicit Gateway(GatewayConfig config);
    ~Gateway();

    Gateway(const Gateway&) = delete;
    Gateway& operator=(const Gateway&) = delete;

    void start();  // binds and serves on a background thread
    void stop();

    std::uint16_t port() const { return port_; }
    std::string url() const;

    ledger::Ledger& ledger() { return *ledger_; }
    const ledger::Ledger& ledger() const { return *ledger_; }
    OpTimingSnapshot stats() const { return stats_.snapshot(); }

  private:
    struct Impl;
    void notify_selection(const std::string& head_entry_json);

    std::unique_ptr<Impl> impl_;

    GatewayConfig config_;
    std::unique_ptr<ledger::Ledger> ledger_;
    TimingStats stats_;
    std::uint16_t port_ = 0;
    std::thread server_thread_;
};

}  // namespace edgeledger::gateway
