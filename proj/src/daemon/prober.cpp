#include "edgeledger/daemon/prober.hpp"

#include <chrono>
#include <semaphore>
#include <thread>

#include "edgeledger/contracts/records.hpp"
#include "edgeledger/log.hpp"
#include "edgeledger/netio/echo.hpp"
#include "edgeledger/netio/socket.hpp"

namespace edgeledger::daemon {

using namespace std::chrono;

Prober::Prober(int timeout_ms, int max_concurrency)
    : timeout_ms_(timeout_ms > 0 ? timeout_ms : 5000),
      max_concurrency_(max_concurrency > 0 ? max_concurrency : 16) {}

std::int64_t Prober::probe_once(const ProbeTarget& target) const {
    try {
        std::string host;
        std::uint16_t port = 0;
        if (!contracts::parse_host_port(target.address, host, port)) return -1;

        // Wall clock stamps the echoed payload; the monotonic clock measures.
        std::int64_t start_wall =
            duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
        auto t0 = steady_clock::now();
        auto deadline = t0 + milliseconds(timeout_ms_);

        auto remaining = [&]() -> milliseconds {
            auto left = duration_cast<milliseconds>(deadline - steady_clock::now());
            if (left.count() <= 0) throw netio::SocketError("probe deadline exceeded");
            return left;
        };

        netio::Socket sock = netio::Socket::connect(host, port, remaining());
        sock.set_recv_timeout(remaining());
        netio::write_frame(sock, netio::credential_token(target.credential_ref));
        std::uint8_t verdict = netio::kAuthReject;
        if (!sock.recv_exact(&verdict, 1) || verdict != netio::kAuthAccept) return -1;

        std::string payload = std::to_string(start_wall);
        sock.set_recv_timeout(remaining());
        netio::write_frame(sock, payload);
        auto reply = netio::read_frame(sock);
        if (!reply || *reply != payload) return -1;

        return duration_cast<milliseconds>(steady_clock::now() - t0).count();
    } catch (const std::exception& e) {
        log::debug("probe to ", target.target_id, " failed: ", e.what());
        return -1;
    }
}

std::vector<ProbeResult> Prober::measure(const std::vector<ProbeTarget>& targets) const {
    std::vector<ProbeResult> results(targets.size());
    std::counting_semaphore<> slots(max_concurrency_);
    std::vector<std::thread> threads;
    threads.reserve(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        slots.acquire();
        threads.emplace_back([this, &targets, &results, &slots, i] {
            results[i].target_id = targets[i].target_id;
            results[i].latency_ms = probe_once(targets[i]);
            slots.release();
        });
    }
    for (auto& t : threads) t.join();
    return results;
}

}  // namespace edgeledger::daemon
