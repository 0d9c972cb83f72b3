#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "edgeledger/daemon/meter.hpp"
#include "edgeledger/daemon/prober.hpp"
#include "edgeledger/netio/echo.hpp"

namespace edgeledger::daemon {

struct DaemonConfig {
    std::string device_id;
    std::string gateway_url;  // e.g. http://127.0.0.1:8080
    int interval_seconds = 30;
    int probe_timeout_ms = 5000;
    // Echo listener for answering probes; empty disables serving.
    std::string listen_address;
    // Credential for the echo listener. Empty means: fetch the device's own
    // inventory record from the gateway and use its credentialRef.
    std::string credential_ref;
};

// Per-device agent. Every tick: fetch probe targets from the gateway, measure
// latency to each, post the batch, sample local resources, post the sample.
// Gateway outages are logged and retried next tick; probe failures are data
// (-1), never crashes.
class Daemon {
  public:
    explicit Daemon(DaemonConfig config, std::shared_ptr<ResourceMeter> meter = nullptr);
    ~Daemon();

    Daemon(const Daemon&) = delete;
    Daemon& operator=(const Daemon&) = delete;

    // Validates config and spawns the loop thread. Throws std::invalid_argument
    // on bad config; netio::SocketError when the echo listener cannot bind.
    void start();
    void stop();

    // Blocking variant for the CLI: runs until stop() from another thread or
    // a signal handler flips the flag.
    void run();

    // Observability for tests and logs.
    std::uint64_t ticks() const { return ticks_.load(); }
    std::uint64_t latency_posts() const { return latency_posts_.load(); }
    std::uint64_t resource_posts() const { return resource_posts_.load(); }

    const DaemonConfig& config() const { return config_; }

  private:
    void loop();
    void tick();
    bool ensure_credential();
    void start_echo();

    DaemonConfig config_;
    std::shared_ptr<ResourceMeter> meter_;
    Prober prober_;
    std::unique_ptr<netio::EchoServer> echo_;
    bool echo_started_ = false;

    std::thread thread_;
    std::mutex mu_;
    std::condition_variable cv_;
    bool stopping_ = false;

    std::atomic<std::uint64_t> ticks_{0};
    std::atomic<std::uint64_t> latency_posts_{0};
    std::atomic<std::uint64_t> resource_posts_{0};
};

}  // namespace edgeledger::daemon
