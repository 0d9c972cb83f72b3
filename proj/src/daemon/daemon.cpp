#include "edgeledger/daemon/daemon.hpp"

#include <httplib.h>

#include <chrono>

#include "edgeledger/contracts/records.hpp"
#include "edgeledger/jsonio.hpp"
#include "edgeledger/log.hpp"

namespace edgeledger::daemon {

using contracts::DeviceRecord;
using jsonio::Json;
using namespace std::chrono;

namespace {
httplib::Client make_client(const std::string& url) {
    httplib::Client client(url);
    client.set_connection_timeout(2, 0);
    client.set_read_timeout(30, 0);
    return client;
}
}  // namespace

Daemon::Daemon(DaemonConfig config, std::shared_ptr<ResourceMeter> meter)
    : config_(std::move(config)),
      meter_(meter ? std::move(meter) : std::make_shared<HostMeter>()),
      prober_(config_.probe_timeout_ms) {}

Daemon::~Daemon() { stop(); }

void Daemon::start() {
    if (config_.device_id.empty()) throw std::invalid_argument("daemon: device id required");
    if (config_.gateway_url.empty()) throw std::invalid_argument("daemon: gateway url required");
    if (config_.interval_seconds < 1)
        throw std::invalid_argument("daemon: interval must be >= 1 second");

    // Bind the probe listener up front; bind failure is fatal. The credential
    // may arrive later (fetched from the inventory), so verification reads it
    // through a shared options closure only once known.
    if (!config_.listen_address.empty() && !config_.credential_ref.empty()) {
        start_echo();
    }
    {
        std::lock_guard<std::mutex> lock(mu_);
        stopping_ = false;
    }
    thread_ = std::thread([this] { loop(); });
}

void Daemon::start_echo() {
    std::string host;
    std::uint16_t port = 0;
    if (!contracts::parse_host_port(config_.listen_address, host, port))
        throw std::invalid_argument("daemon: bad listen address: " + config_.listen_address);
    netio::EchoServerOptions options;
    options.listen_host = host;
    options.port = port;
    options.credential_ref = config_.credential_ref;
    echo_ = std::make_unique<netio::EchoServer>(options);
    echo_->start();
    echo_started_ = true;
    log::info("echo listener on ", echo_->address());
}

void Daemon::stop() {
    {
        std::lock_guard<std::mutex> lock(mu_);
        if (stopping_ && !thread_.joinable()) return;
        stopping_ = true;
    }
    cv_.notify_all();
    if (thread_.joinable()) thread_.join();
    if (echo_) echo_->stop();
}

void Daemon::run() {
    start();
    thread_.join();
}

bool Daemon::ensure_credential() {
    if (config_.listen_address.empty() || echo_started_) return true;
    if (config_.credential_ref.empty()) {
        auto client = make_client(config_.gateway_url);
        auto res = client.Get("/devices/" + config_.device_id);
        if (!res || res->status != 200) {
            log::warn("cannot fetch own record yet, echo listener deferred");
            return false;
        }
        try {
            config_.credential_ref = DeviceRecord::parse(res->body).credential_ref;
        } catch (const std::exception& e) {
            log::warn("own record unparsable: ", e.what());
            return false;
        }
    }
    try {
        start_echo();
    } catch (const std::exception& e) {
        log::error("echo listener failed to start: ", e.what());
        throw;
    }
    return true;
}

void Daemon::loop() {
    const auto interval = seconds(config_.interval_seconds);
    auto next_tick = steady_clock::now();
    std::unique_lock<std::mutex> lock(mu_);
    while (!stopping_) {
        lock.unlock();
        try {
            ensure_credential();
            tick();
        } catch (const std::exception& e) {
            log::error("tick failed: ", e.what());
        }
        ticks_.fetch_add(1);
        lock.lock();
        next_tick += interval;
        cv_.wait_until(lock, next_tick, [&] { return stopping_; });
    }
}

void Daemon::tick() {
    auto client = make_client(config_.gateway_url);

    // Targets, probes, results batch.
    std::vector<ProbeTarget> targets;
    bool have_targets = false;
    if (auto res = client.Get("/targets?source=" + config_.device_id);
        res && res->status == 200) {
        try {
            Json body = jsonio::parse(res->body, "target list");
            for (const auto& item : body) {
                ProbeTarget t;
                t.target_id = jsonio::require_string(item, "targetId", "target list");
                t.address = jsonio::require_string(item, "address", "target list");
                t.credential_ref = jsonio::require_string(item, "credentialRef", "target list");
                targets.push_back(std::move(t));
            }
            have_targets = true;
        } catch (const std::exception& e) {
            log::warn("target list unparsable: ", e.what());
        }
    } else {
        log::warn("gateway unreachable for targets, retrying next tick");
    }

    if (have_targets && !targets.empty()) {
        std::vector<ProbeResult> results = prober_.measure(targets);
        Json batch = Json::array();
        for (const auto& r : results) {
            Json row;
            row["sourceId"] = config_.device_id;
            row["targetId"] = r.target_id;
            row["latencyMs"] = r.latency_ms;
            batch.push_back(std::move(row));
        }
        if (auto res = client.Post("/latency", batch.dump(), "application/json");
            res && res->status == 201) {
            latency_posts_.fetch_add(1);
        } else {
            log::warn("latency post failed (status ",
                      res ? std::to_string(res->status) : "none", ")");
        }
    }

    // Resource sample.
    if (auto reading = meter_->read()) {
        Json sample;
        sample["deviceId"] = config_.device_id;
        sample["cpuPercent"] = reading->cpu_percent;
        sample["memoryPercent"] = reading->memory_percent;
        sample["containerCount"] = reading->container_count;
        if (auto res = client.Post("/resources", sample.dump(), "application/json");
            res && res->status == 201) {
            resource_posts_.fetch_add(1);
        } else {
            log::warn("resource post failed (status ",
                      res ? std::to_string(res->status) : "none", ")");
        }
    } else {
        log::warn("resource sample unavailable, skipped this tick");
    }
}

}  // namespace edgeledger::daemon
