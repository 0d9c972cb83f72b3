#include <doctest.h>

#include <httplib.h>

#include <thread>

#include "edgeledger/daemon/daemon.hpp"
#include "edgeledger/gateway/gateway.hpp"
#include "edgeledger/netio/echo.hpp"
#include "test_support.hpp"

using namespace edgeledger;
using namespace std::chrono_literals;
using testsupport::device_json;
using testsupport::TempDir;

namespace {

gateway::GatewayConfig fast_gateway_config(const std::filesystem::path& ledger_path,
                                           std::uint16_t port = 0) {
    gateway::GatewayConfig cfg;
    cfg.port = port;
    cfg.ledger_path = ledger_path;
    cfg.block_timeout_ms = 40;
    return cfg;
}

void register_device(gateway::Gateway& gw, const std::string& id, const std::string& role,
                     const std::string& address = "127.0.0.1:1") {
    gw.ledger().submit("inventory", "CreateDevice", {device_json(id, role, false, address)});
}

std::uint16_t free_port() {
    netio::Listener l = netio::Listener::bind("127.0.0.1", 0);
    return l.port();
}

}  // namespace

TEST_CASE("host meter reports percentages in range") {
    daemon::HostMeter meter;
    auto reading = meter.read();
    REQUIRE(reading.has_value());
    CHECK(reading->cpu_percent >= 0.0);
    CHECK(reading->cpu_percent <= 100.0);
    CHECK(reading->memory_percent >= 0.0);
    CHECK(reading->memory_percent <= 100.0);
    CHECK(reading->container_count == 0);  // no workload counter configured
}

TEST_CASE("host meter uses the pluggable workload counter") {
    daemon::HostMeter meter([] { return std::int64_t{5}; });
    auto reading = meter.read();
    REQUIRE(reading.has_value());
    CHECK(reading->container_count == 5);
}

TEST_CASE("daemon posts meter readings and probe batches every tick") {
    TempDir dir;
    gateway::Gateway gw(fast_gateway_config(dir.file("blocks.log")));
    gw.start();

    netio::EchoServerOptions echo_opts;
    echo_opts.credential_ref = "cred-sensor";
    netio::EchoServer echo(std::move(echo_opts));
    echo.start();

    register_device(gw, "server-1", "edge-server");
    register_device(gw, "sensor", "sensor", echo.address());

    daemon::DaemonConfig cfg;
    cfg.device_id = "server-1";
    cfg.gateway_url = gw.url();
    cfg.interval_seconds = 1;
    cfg.probe_timeout_ms = 1000;
    auto meter = std::make_shared<daemon::FixedMeter>(daemon::ResourceReading{50.0, 25.0, 3});
    daemon::Daemon d(cfg, meter);
    d.start();
    std::this_thread::sleep_for(2500ms);
    d.stop();
    echo.stop();

    // Three ticks fit in 2.5 s at 1 s cadence; allow scheduler slack.
    CHECK(d.ticks() >= 2);
    CHECK(d.ticks() <= 4);
    CHECK(d.resource_posts() == d.ticks());
    CHECK(d.latency_posts() == d.ticks());

    // Pluggable meter values pass through unchanged; keys never collide.
    auto samples = gw.ledger().range_query("resource:server-1:");
    CHECK(samples.size() == d.resource_posts());
    for (const auto& [key, value] : samples) {
        auto j = jsonio::parse(value, "sample");
        CHECK(j["cpuPercent"] == 50.0);
        CHECK(j["memoryPercent"] == 25.0);
        CHECK(j["containerCount"] == 3);
    }

    auto probes = gw.ledger().range_query("latency:sensor:server-1:");
    CHECK(probes.size() == d.latency_posts());
    for (const auto& [key, value] : probes) {
        auto j = jsonio::parse(value, "probe");
        CHECK(j["latencyMs"].get<std::int64_t>() >= 0);
    }
    gw.stop();
}

TEST_CASE("daemon survives a gateway outage and resumes next tick") {
    TempDir dir;
    auto ledger_path = dir.file("blocks.log");
    std::uint16_t port = free_port();

    auto gw1 = std::make_unique<gateway::Gateway>(fast_gateway_config(ledger_path, port));
    gw1->start();
    register_device(*gw1, "server-1", "edge-server");
    register_device(*gw1, "sensor", "sensor");

    daemon::DaemonConfig cfg;
    cfg.device_id = "server-1";
    cfg.gateway_url = "http://127.0.0.1:" + std::to_string(port);
    cfg.interval_seconds = 1;
    cfg.probe_timeout_ms = 200;
    auto meter = std::make_shared<daemon::FixedMeter>(daemon::ResourceReading{10.0, 10.0, 0});
    daemon::Daemon d(cfg, meter);
    d.start();

    std::this_thread::sleep_for(1200ms);  // tick 1 lands
    auto posts_before_outage = d.resource_posts();
    CHECK(posts_before_outage >= 1);

    gw1.reset();  // gateway down for tick 2
    std::this_thread::sleep_for(1200ms);

    auto gw2 = std::make_unique<gateway::Gateway>(fast_gateway_config(ledger_path, port));
    gw2->start();  // same ledger file: inventory survives the restart
    std::this_thread::sleep_for(1500ms);

    d.stop();
    CHECK(d.resource_posts() > posts_before_outage);  // resumed after the outage
    CHECK(d.ticks() >= 3);
    gw2->stop();
}

TEST_CASE("tick cadence holds over ten seconds") {
    TempDir dir;
    gateway::Gateway gw(fast_gateway_config(dir.file("blocks.log")));
    gw.start();
    register_device(gw, "server-1", "edge-server");

    daemon::DaemonConfig cfg;
    cfg.device_id = "server-1";
    cfg.gateway_url = gw.url();
    cfg.interval_seconds = 1;
    auto meter = std::make_shared<daemon::FixedMeter>(daemon::ResourceReading{1.0, 1.0, 0});
    daemon::Daemon d(cfg, meter);
    d.start();
    std::this_thread::sleep_for(10s);
    d.stop();
    gw.stop();

    CHECK(d.ticks() >= 9);
    CHECK(d.ticks() <= 11);
}

TEST_CASE("daemon config validation") {
    daemon::DaemonConfig cfg;
    cfg.device_id = "";
    cfg.gateway_url = "http://127.0.0.1:1";
    daemon::Daemon d(cfg);
    CHECK_THROWS_AS(d.start(), std::invalid_argument);

    cfg.device_id = "x";
    cfg.interval_seconds = 0;
    daemon::Daemon d2(cfg);
    CHECK_THROWS_AS(d2.start(), std::invalid_argument);
}

TEST_CASE("daemon serves echo once the credential is known") {
    TempDir dir;
    gateway::Gateway gw(fast_gateway_config(dir.file("blocks.log")));
    gw.start();
    register_device(gw, "server-1", "edge-server");

    std::uint16_t port = free_port();
    daemon::DaemonConfig cfg;
    cfg.device_id = "server-1";
    cfg.gateway_url = gw.url();
    cfg.interval_seconds = 1;
    cfg.listen_address = "127.0.0.1:" + std::to_string(port);
    auto meter = std::make_shared<daemon::FixedMeter>(daemon::ResourceReading{1.0, 1.0, 0});
    daemon::Daemon d(cfg, meter);
    d.start();
    std::this_thread::sleep_for(1500ms);  // first tick fetches the credential

    // The inventory credential for server-1 is "cred-server-1".
    daemon::Prober prober(1000);
    CHECK(prober.probe_once({"server-1", cfg.listen_address, "cred-server-1"}) >= 0);
    CHECK(prober.probe_once({"server-1", cfg.listen_address, "wrong"}) == -1);

    d.stop();
    gw.stop();
}
