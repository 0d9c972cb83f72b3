#include <doctest.h>

#include <random>
#include <thread>

#include "edgeledger/daemon/prober.hpp"
#include "edgeledger/netio/echo.hpp"
#include "test_support.hpp"

using namespace edgeledger;
using namespace edgeledger::netio;
using edgeledger::daemon::Prober;
using edgeledger::daemon::ProbeTarget;

namespace {

EchoServerOptions basic_options(const std::string& cred) {
    EchoServerOptions o;
    o.credential_ref = cred;
    return o;
}

ProbeTarget target_for(const EchoServer& server, const std::string& cred,
                       const std::string& id = "sensor") {
    return ProbeTarget{id, server.address(), cred};
}

}  // namespace

TEST_CASE("echo returns any payload byte-identical up to 1 KiB") {
    EchoServer server(basic_options("cred"));
    server.start();

    Socket sock = Socket::connect("127.0.0.1", server.port(), std::chrono::milliseconds(1000));
    sock.set_recv_timeout(std::chrono::milliseconds(2000));
    write_frame(sock, credential_token("cred"));
    std::uint8_t verdict = 0;
    REQUIRE(sock.recv_exact(&verdict, 1));
    REQUIRE(verdict == kAuthAccept);

    std::mt19937_64 rng(5);
    for (std::size_t size : {std::size_t{0}, std::size_t{1}, std::size_t{7}, std::size_t{128},
                             std::size_t{1024}}) {
        std::string payload(size, '\0');
        for (auto& c : payload) c = static_cast<char>(rng() & 0xff);  // binary-safe
        write_frame(sock, payload);
        auto reply = read_frame(sock);
        REQUIRE(reply.has_value());
        CHECK(*reply == payload);
    }
    server.stop();
}

TEST_CASE("wrong credential is rejected and probes report -1") {
    EchoServer server(basic_options("right"));
    server.start();

    Prober prober(1000);
    CHECK(prober.probe_once(target_for(server, "wrong")) == -1);
    CHECK(prober.probe_once(target_for(server, "right")) >= 0);
    server.stop();
}

TEST_CASE("unreachable and malformed targets yield -1") {
    // Bind then immediately free a port so nothing listens there.
    std::uint16_t dead_port;
    {
        Listener l = Listener::bind("127.0.0.1", 0);
        dead_port = l.port();
    }
    Prober prober(500);
    CHECK(prober.probe_once({"t", "127.0.0.1:" + std::to_string(dead_port), "c"}) == -1);
    CHECK(prober.probe_once({"t", "no-port-here", "c"}) == -1);
    CHECK(prober.probe_once({"t", "127.0.0.1:notaport", "c"}) == -1);
}

TEST_CASE("empty target list yields an empty result list") {
    Prober prober;
    CHECK(prober.measure({}).empty());
}

TEST_CASE("a peer that echoes the wrong payload yields -1") {
    auto options = basic_options("cred");
    options.plan = [] {
        ReplyPlan p;
        p.action = ReplyPlan::Action::corrupt;
        return p;
    };
    EchoServer server(std::move(options));
    server.start();
    Prober prober(1000);
    CHECK(prober.probe_once(target_for(server, "cred")) == -1);
    server.stop();
}

TEST_CASE("a peer that drops the connection yields -1") {
    auto options = basic_options("cred");
    options.plan = [] {
        ReplyPlan p;
        p.action = ReplyPlan::Action::drop;
        return p;
    };
    EchoServer server(std::move(options));
    server.start();
    Prober prober(1000);
    CHECK(prober.probe_once(target_for(server, "cred")) == -1);
    server.stop();
}

TEST_CASE("probe timeout turns a slow peer into -1") {
    auto options = basic_options("cred");
    options.plan = [] {
        ReplyPlan p;
        p.delay = std::chrono::milliseconds(800);
        return p;
    };
    EchoServer server(std::move(options));
    server.start();
    Prober prober(200);
    CHECK(prober.probe_once(target_for(server, "cred")) == -1);
    server.stop();
}

TEST_CASE("measured latency respects the injected round-trip bound") {
    const int injected_round_trip = 100;  // one-way d=50
    auto options = basic_options("cred");
    options.plan = [&] {
        ReplyPlan p;
        p.delay = std::chrono::milliseconds(injected_round_trip);
        return p;
    };
    EchoServer server(std::move(options));
    server.start();

    Prober prober(5000);
    for (int i = 0; i < 3; ++i) {
        auto latency = prober.probe_once(target_for(server, "cred"));
        REQUIRE(latency >= 0);
        CHECK(latency >= static_cast<std::int64_t>(injected_round_trip * 0.9));
        CHECK(latency <= injected_round_trip + 250);
    }
    server.stop();
}

TEST_CASE("concurrent probes all succeed with correct results") {
    EchoServer server(basic_options("cred"));
    server.start();

    std::vector<ProbeTarget> targets;
    for (int i = 0; i < 8; ++i)
        targets.push_back(target_for(server, "cred", "sensor-" + std::to_string(i)));

    Prober prober(3000);
    auto results = prober.measure(targets);
    REQUIRE(results.size() == 8);
    for (int i = 0; i < 8; ++i) {
        CHECK(results[i].target_id == targets[i].target_id);  // input order kept
        CHECK(results[i].latency_ms >= 0);
    }
    server.stop();
}

TEST_CASE("failure totality: mixed targets always produce one result each") {
    EchoServer good(basic_options("cred"));
    good.start();
    std::vector<ProbeTarget> targets = {
        target_for(good, "cred", "ok"),
        {"dead", "127.0.0.1:1", "cred"},
        {"garbled", "::::", "cred"},
        target_for(good, "wrong-cred", "badauth"),
    };
    Prober prober(500);
    auto results = prober.measure(targets);
    REQUIRE(results.size() == targets.size());
    CHECK(results[0].latency_ms >= 0);
    CHECK(results[1].latency_ms == -1);
    CHECK(results[2].latency_ms == -1);
    CHECK(results[3].latency_ms == -1);
    good.stop();
}
