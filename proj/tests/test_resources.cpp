#include <doctest.h>

#include <random>

#include "edgeledger/contracts/contracts.hpp"
#include "test_support.hpp"

using namespace edgeledger;
using namespace edgeledger::contracts;
using testsupport::device_json;
using testsupport::make_contract_ledger;
using testsupport::TestClock;

namespace {

jsonio::Json sample_body(const std::string& device_id, double cpu, double mem,
                         std::int64_t containers) {
    jsonio::Json j;
    j["deviceId"] = device_id;
    j["cpuPercent"] = cpu;
    j["memoryPercent"] = mem;
    j["containerCount"] = containers;
    return j;
}

}  // namespace

TEST_CASE("stored sample key encodes device, ordering timestamp and tx id") {
    TestClock clock;
    clock.set(1700000000123);
    auto lg = make_contract_ledger(clock);
    lg->submit(kInventoryContract, "CreateDevice", {device_json("dev", "sensor", false)});

    auto tx = lg->submit(kResourcesContract, "PutResourceSample",
                         {sample_body("dev", 12.5, 40.0, 2).dump()});
    REQUIRE(tx.writes.size() == 1);
    CHECK(tx.writes[0].key == "resource:dev:00000001700000000123:" + tx.tx_id);

    auto stored = ResourceSample::from_json(jsonio::parse(tx.writes[0].value, "s"));
    CHECK(stored.timestamp_ms == 1700000000123);  // stamped by the ordering step
    CHECK(stored.cpu_percent == 12.5);
    CHECK(stored.container_count == 2);
}

TEST_CASE("sample validation") {
    TestClock clock;
    auto lg = make_contract_ledger(clock);
    lg->submit(kInventoryContract, "CreateDevice", {device_json("dev", "sensor", false)});

    auto expect_code = [&](const jsonio::Json& body, ErrorCode code) {
        try {
            lg->submit(kResourcesContract, "PutResourceSample", {body.dump()});
            FAIL("expected rejection");
        } catch (const ContractError& e) {
            CHECK(e.code() == code);
        }
    };

    expect_code(sample_body("ghost", 10, 10, 0), ErrorCode::not_found);
    expect_code(sample_body("dev", 101, 10, 0), ErrorCode::validation);
    expect_code(sample_body("dev", -0.5, 10, 0), ErrorCode::validation);
    expect_code(sample_body("dev", 10, 100.5, 0), ErrorCode::validation);
    expect_code(sample_body("dev", 10, 10, -1), ErrorCode::validation);
    // Client-supplied timestamps are not part of the schema.
    auto with_ts = sample_body("dev", 10, 10, 0);
    with_ts["timestampMs"] = 123;
    expect_code(with_ts, ErrorCode::validation);
}

TEST_CASE("history appends are never overwritten and scan time-ordered") {
    TestClock clock;
    auto lg = make_contract_ledger(clock);
    lg->submit(kInventoryContract, "CreateDevice", {device_json("dev", "sensor", false)});

    std::vector<std::pair<std::int64_t, double>> oracle;  // (ts, cpu) in submit order
    for (int i = 0; i < 5; ++i) {
        clock.set(1000 + i * 250);
        double cpu = 10.0 + i;
        lg->submit(kResourcesContract, "PutResourceSample",
                   {sample_body("dev", cpu, 50, 1).dump()});
        oracle.emplace_back(1000 + i * 250, cpu);
    }

    auto rows = lg->range_query("resource:dev:");
    REQUIRE(rows.size() == oracle.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto stored = ResourceSample::from_json(jsonio::parse(rows[i].second, "s"));
        CHECK(stored.timestamp_ms == oracle[i].first);
        CHECK(stored.cpu_percent == oracle[i].second);
    }
}

TEST_CASE("analysis matches the Up Board cpu average") {
    TestClock clock;
    auto lg = make_contract_ledger(clock);
    lg->submit(kInventoryContract, "CreateDevice", {device_json("upboard", "edge-server", false)});

    for (double cpu : {2.0, 2.1, 2.14}) {
        clock.advance(1000);
        lg->submit(kResourcesContract, "PutResourceSample",
                   {sample_body("upboard", cpu, 9.39, 1).dump()});
    }
    auto analysis = ResourceAnalysis::from_json(jsonio::parse(
        lg->evaluate(kResourcesContract, "AnalyseResources", {"upboard", "10", "5000"}), "a"));
    CHECK(analysis.sample_count == 3);
    CHECK(analysis.avg_cpu == doctest::Approx(2.08).epsilon(1e-9));
    CHECK(analysis.avg_memory == doctest::Approx(9.39).epsilon(1e-9));
}

TEST_CASE("window is closed on both ends") {
    TestClock clock;
    auto lg = make_contract_ledger(clock);
    lg->submit(kInventoryContract, "CreateDevice", {device_json("dev", "sensor", false)});

    const std::int64_t now = 10 * 60000 + 5000;
    const std::int64_t window_start = now - 60000;
    for (std::int64_t ts : {window_start - 1, window_start, now, now + 1}) {
        clock.set(ts);
        lg->submit(kResourcesContract, "PutResourceSample",
                   {sample_body("dev", 50, 50, 0).dump()});
    }
    auto analysis = ResourceAnalysis::from_json(jsonio::parse(
        lg->evaluate(kResourcesContract, "AnalyseResources",
                     {"dev", "1", std::to_string(now)}),
        "a"));
    CHECK(analysis.sample_count == 2);  // both boundary samples, neither outside
}

TEST_CASE("empty window reports zero samples and omits averages") {
    TestClock clock;
    auto lg = make_contract_ledger(clock);
    lg->submit(kInventoryContract, "CreateDevice", {device_json("dev", "sensor", false)});

    auto payload =
        lg->evaluate(kResourcesContract, "AnalyseResources", {"dev", "10", "600000"});
    auto j = jsonio::parse(payload, "a");
    CHECK(j["sampleCount"] == 0);
    CHECK_FALSE(j.contains("avgCpu"));
    CHECK_FALSE(j.contains("avgMemory"));
    CHECK_FALSE(j.contains("avgContainers"));
}

TEST_CASE("analysis rejects unknown devices and bad windows") {
    TestClock clock;
    auto lg = make_contract_ledger(clock);
    CHECK_THROWS_AS(lg->evaluate(kResourcesContract, "AnalyseResources", {"ghost", "10", "0"}),
                    ContractError);
    lg->submit(kInventoryContract, "CreateDevice", {device_json("dev", "sensor", false)});
    CHECK_THROWS_AS(lg->evaluate(kResourcesContract, "AnalyseResources", {"dev", "0", "0"}),
                    ContractError);
    CHECK_THROWS_AS(lg->evaluate(kResourcesContract, "AnalyseResources", {"dev", "-3", "0"}),
                    ContractError);
    CHECK_THROWS_AS(lg->evaluate(kResourcesContract, "AnalyseResources", {"dev", "x", "0"}),
                    ContractError);
}

TEST_CASE("randomized in/out-of-window mix matches the filter-and-mean oracle") {
    std::mt19937_64 rng(2024);
    for (int round = 0; round < 50; ++round) {
        TestClock clock;
        auto lg = make_contract_ledger(clock);
        lg->submit(kInventoryContract, "CreateDevice", {device_json("dev", "sensor", false)});

        const std::int64_t now = 20 * 60000;
        const std::int64_t window_minutes = 1 + static_cast<std::int64_t>(rng() % 10);
        const std::int64_t start = now - window_minutes * 60000;

        double cpu_sum = 0, mem_sum = 0, cont_sum = 0;
        std::int64_t in_window = 0;
        int samples = 1 + static_cast<int>(rng() % 20);
        for (int i = 0; i < samples; ++i) {
            std::int64_t ts = static_cast<std::int64_t>(rng() % (2 * 20 * 60000));
            double cpu = static_cast<double>(rng() % 10000) / 100.0;
            double mem = static_cast<double>(rng() % 10000) / 100.0;
            std::int64_t cont = static_cast<std::int64_t>(rng() % 8);
            clock.set(ts);
            lg->submit(kResourcesContract, "PutResourceSample",
                       {sample_body("dev", cpu, mem, cont).dump()});
            if (ts >= start && ts <= now) {
                cpu_sum += cpu;
                mem_sum += mem;
                cont_sum += static_cast<double>(cont);
                ++in_window;
            }
        }

        auto analysis = ResourceAnalysis::from_json(jsonio::parse(
            lg->evaluate(kResourcesContract, "AnalyseResources",
                         {"dev", std::to_string(window_minutes), std::to_string(now)}),
            "a"));
        REQUIRE(analysis.sample_count == in_window);
        if (in_window > 0) {
            double n = static_cast<double>(in_window);
            CHECK(analysis.avg_cpu == doctest::Approx(cpu_sum / n).epsilon(1e-9));
            CHECK(analysis.avg_memory == doctest::Approx(mem_sum / n).epsilon(1e-9));
            CHECK(analysis.avg_containers == doctest::Approx(cont_sum / n).epsilon(1e-9));
        }
    }
}
