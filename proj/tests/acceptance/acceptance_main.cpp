// Acceptance suite: every criterion prints one PASS/FAIL line; the process
// exits nonzero when any criterion fails. Tolerances are pinned in code.
#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "edgeledger/contracts/contracts.hpp"
#include "edgeledger/daemon/prober.hpp"
#include "edgeledger/gateway/gateway.hpp"
#include "edgeledger/ledger/ledger.hpp"
#include "edgeledger/netio/echo.hpp"
#include "edgeledger/sim/runner.hpp"
#include "../test_support.hpp"

using namespace edgeledger;
using namespace std::chrono;
using jsonio::Json;
using testsupport::device_json;
using testsupport::fixture;
using testsupport::make_contract_ledger;
using testsupport::TempDir;
using testsupport::TestClock;

namespace {

struct Criterion {
    std::string name;
    std::function<bool(std::string&)> fn;
};

double mean_of(const sim::ScenarioReport& report, const std::string& id) {
    for (const auto& row : report.servers)
        if (row.server_id == id) return row.mean_latency_ms;
    return -1.0;
}

bool within(double value, double target, double rel_tolerance) {
    return value >= target * (1.0 - rel_tolerance) && value <= target * (1.0 + rel_tolerance);
}

// ---- criteria 1-3: scenario replay over real sockets -----------------------

bool scenario_replay(const std::string& scenario_file, const std::string& expected_winner,
                     const std::map<std::string, double>& latency_targets, std::string& detail) {
    auto spec = sim::load_scenario(fixture(scenario_file));
    sim::RunnerOptions options;
    options.mode = sim::RunnerOptions::Mode::realtime;

    auto t0 = steady_clock::now();
    auto report = sim::run_scenario(spec, options);
    double runtime_s = duration<double>(steady_clock::now() - t0).count();

    bool ok = true;
    std::string parts;
    if (runtime_s >= 60.0) {
        ok = false;
        parts += " runtime " + std::to_string(runtime_s) + "s >= 60s;";
    }
    if (report.selected_server_id != expected_winner) {
        ok = false;
        parts += " winner '" + report.selected_server_id + "' != '" + expected_winner + "';";
    }
    for (const auto& [id, target] : latency_targets) {
        double mean = mean_of(report, id);
        if (!within(mean, target, 0.10)) {
            ok = false;
            parts += " " + id + " mean " + std::to_string(mean) + " outside " +
                     std::to_string(target) + " +/-10%;";
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "winner=%s runtime=%.1fs", report.selected_server_id.c_str(),
                  runtime_s);
    detail = std::string(buf) + (ok ? "" : " |" + parts);
    return ok;
}

bool criterion_exp1(std::string& detail) {
    return scenario_replay("exp1.json", "upboard",
                           {{"hfn-server", 274.40}, {"upboard", 273.08}, {"raspberrypi3", 280.80}},
                           detail);
}

bool criterion_exp3(std::string& detail) {
    return scenario_replay(
        "exp3.json", "hfn-server",
        {{"hfn-server", 276.18}, {"upboard", 306.62}, {"raspberrypi3", 357.07}}, detail);
}

bool criterion_exp5(std::string& detail) {
    auto spec = sim::load_scenario(fixture("exp5.json"));
    sim::RunnerOptions options;
    options.mode = sim::RunnerOptions::Mode::realtime;
    auto report = sim::run_scenario(spec, options);

    double hfn = mean_of(report, "hfn-server");
    double up = mean_of(report, "upboard");
    double rpi = mean_of(report, "raspberrypi3");
    bool ratio_ok = hfn > 5.0 * up && hfn > 5.0 * rpi;

    // Selection must equal the argmin of the generated means (ascending
    // latency rule; the scenario's source tables nominally name upboard, the
    // documented deviation).
    std::string argmin;
    double best = 0.0;
    for (const auto& row : report.servers) {
        if (argmin.empty() || row.mean_latency_ms < best) {
            argmin = row.server_id;
            best = row.mean_latency_ms;
        }
    }
    bool argmin_ok = report.selected_server_id == argmin;

    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "hfn=%.0fms up=%.0fms rpi3=%.0fms selected=%s (argmin rule; nominal table "
                  "winner differs by design)",
                  hfn, up, rpi, report.selected_server_id.c_str());
    detail = buf;
    return ratio_ok && argmin_ok;
}

// ---- criterion 4: selection ordering oracle ---------------------------------

bool criterion_selection_oracle(std::string& detail) {
    std::mt19937_64 rng(0xC0FFEE);
    const double values[] = {1.0, 2.0, 3.0, 4.0};
    int mismatches = 0;

    for (int round = 0; round < 1000; ++round) {
        std::vector<contracts::SelectionEntry> entries;
        int n = 1 + static_cast<int>(rng() % 10);
        for (int i = 0; i < n; ++i) {
            contracts::SelectionEntry e;
            e.server_id = "srv" + std::to_string(i);
            e.avg_latency_ms = values[rng() % 4];
            e.avg_cpu = values[rng() % 4];
            e.avg_memory = values[rng() % 4];
            e.avg_containers = values[rng() % 4];
            entries.push_back(std::move(e));
        }
        std::shuffle(entries.begin(), entries.end(), rng);

        auto expected = entries;
        std::stable_sort(expected.begin(), expected.end(),
                         [](const contracts::SelectionEntry& a,
                            const contracts::SelectionEntry& b) {
                             return std::make_tuple(a.avg_latency_ms, a.avg_cpu, a.avg_memory,
                                                    a.avg_containers, a.server_id) <
                                    std::make_tuple(b.avg_latency_ms, b.avg_cpu, b.avg_memory,
                                                    b.avg_containers, b.server_id);
                         });
        auto actual = entries;
        contracts::sort_selection_entries(actual);
        for (std::size_t i = 0; i < actual.size(); ++i)
            if (actual[i].server_id != expected[i].server_id) {
                ++mismatches;
                break;
            }
    }

    // Spot checks through the full contract pipeline: engineered averages,
    // ordering must match the same oracle.
    for (int round = 0; round < 25; ++round) {
        TestClock clock;
        auto lg = make_contract_ledger(clock);
        lg->submit("inventory", "CreateDevice", {device_json("sensor", "sensor", false)});

        std::vector<contracts::SelectionEntry> expected_entries;
        int n = 2 + static_cast<int>(rng() % 4);
        clock.set(1000);
        for (int i = 0; i < n; ++i) {
            std::string id = "srv" + std::to_string(i);
            lg->submit("inventory", "CreateDevice", {device_json(id, "edge-server", false)});
            std::int64_t latency = static_cast<std::int64_t>(100 + 100 * (rng() % 2));
            double cpu = values[rng() % 4];
            clock.advance(10);
            Json row;
            row["sourceId"] = id;
            row["targetId"] = "sensor";
            row["latencyMs"] = latency;
            lg->submit("latency", "PutLatencyMeasurements", {Json::array({row}).dump()});
            clock.advance(10);
            Json sample;
            sample["deviceId"] = id;
            sample["cpuPercent"] = cpu;
            sample["memoryPercent"] = 50.0;
            sample["containerCount"] = 1;
            lg->submit("resources", "PutResourceSample", {sample.dump()});

            contracts::SelectionEntry e;
            e.server_id = id;
            e.avg_latency_ms = static_cast<double>(latency);
            e.avg_cpu = cpu;
            e.avg_memory = 50.0;
            e.avg_containers = 1.0;
            expected_entries.push_back(std::move(e));
        }
        std::stable_sort(expected_entries.begin(), expected_entries.end(),
                         [](const contracts::SelectionEntry& a,
                            const contracts::SelectionEntry& b) {
                             return std::make_tuple(a.avg_latency_ms, a.avg_cpu, a.avg_memory,
                                                    a.avg_containers, a.server_id) <
                                    std::make_tuple(b.avg_latency_ms, b.avg_cpu, b.avg_memory,
                                                    b.avg_containers, b.server_id);
                         });

        contracts::TaskProperties task;
        auto payload = lg->evaluate("selection", "SelectOffloadServer",
                                    {"sensor", task.to_json().dump(), "10", "60000"});
        auto entries = jsonio::parse(payload, "entries");
        if (entries.size() != expected_entries.size()) {
            ++mismatches;
            continue;
        }
        for (std::size_t i = 0; i < entries.size(); ++i)
            if (entries[i]["serverId"] != expected_entries[i].server_id) {
                ++mismatches;
                break;
            }
    }

    detail = "1000 randomized orderings + 25 full-pipeline checks, mismatches=" +
             std::to_string(mismatches);
    return mismatches == 0;
}

// ---- criterion 5: analysis averages oracle ----------------------------------

bool criterion_analysis_oracle(std::string& detail) {
    std::mt19937_64 rng(0xBEEF);
    const double kRelTol = 1e-9;
    int failures = 0;

    for (int round = 0; round < 1000; ++round) {
        TestClock clock;
        auto lg = make_contract_ledger(clock);
        lg->submit("inventory", "CreateDevice", {device_json("dev", "edge-server", false)});
        lg->submit("inventory", "CreateDevice", {device_json("sensor", "sensor", false)});

        const std::int64_t now = 3600 * 1000;
        const std::int64_t window_minutes = 1 + static_cast<std::int64_t>(rng() % 30);
        const std::int64_t start = now - window_minutes * 60000;

        // Resource side.
        double cpu_sum = 0, mem_sum = 0, cont_sum = 0;
        std::int64_t res_count = 0;
        int res_n = static_cast<int>(rng() % 12);
        for (int i = 0; i < res_n; ++i) {
            std::int64_t ts = static_cast<std::int64_t>(rng() % (2 * 3600 * 1000));
            double cpu = static_cast<double>(rng() % 100000) / 1000.0;
            double mem = static_cast<double>(rng() % 100000) / 1000.0;
            std::int64_t cont = static_cast<std::int64_t>(rng() % 10);
            clock.set(ts);
            Json s;
            s["deviceId"] = "dev";
            s["cpuPercent"] = cpu;
            s["memoryPercent"] = mem;
            s["containerCount"] = cont;
            lg->submit("resources", "PutResourceSample", {s.dump()});
            if (ts >= start && ts <= now) {
                cpu_sum += cpu;
                mem_sum += mem;
                cont_sum += static_cast<double>(cont);
                ++res_count;
            }
        }

        // Latency side with -1 sentinels mixed in.
        double lat_sum = 0;
        std::int64_t lat_count = 0;
        int lat_n = static_cast<int>(rng() % 12);
        for (int i = 0; i < lat_n; ++i) {
            std::int64_t ts = static_cast<std::int64_t>(rng() % (2 * 3600 * 1000));
            std::int64_t latency =
                rng() % 4 == 0 ? -1 : static_cast<std::int64_t>(rng() % 6000);
            clock.set(ts);
            Json row;
            row["sourceId"] = "dev";
            row["targetId"] = "sensor";
            row["latencyMs"] = latency;
            lg->submit("latency", "PutLatencyMeasurements", {Json::array({row}).dump()});
            if (latency >= 0 && ts >= start && ts <= now) {
                lat_sum += static_cast<double>(latency);
                ++lat_count;
            }
        }

        auto res = contracts::ResourceAnalysis::from_json(jsonio::parse(
            lg->evaluate("resources", "AnalyseResources",
                         {"dev", std::to_string(window_minutes), std::to_string(now)}),
            "a"));
        bool ok = res.sample_count == res_count;
        if (ok && res_count > 0) {
            double n = static_cast<double>(res_count);
            ok = std::abs(res.avg_cpu - cpu_sum / n) <= kRelTol * std::abs(cpu_sum / n) &&
                 std::abs(res.avg_memory - mem_sum / n) <= kRelTol * std::abs(mem_sum / n) &&
                 std::abs(res.avg_containers - cont_sum / n) <=
                     kRelTol * std::max(1.0, std::abs(cont_sum / n));
        }

        auto lat = contracts::LatencyAnalysis::from_json(jsonio::parse(
            lg->evaluate("latency", "AnalyseLatencyToTarget",
                         {"sensor", std::to_string(window_minutes), std::to_string(now)}),
            "a"));
        if (lat_count == 0) {
            ok = ok && lat.per_server.empty();
        } else {
            ok = ok && lat.per_server.size() == 1 &&
                 lat.per_server[0].sample_count == lat_count &&
                 std::abs(lat.per_server[0].avg_latency_ms - lat_sum / lat_count) <=
                     kRelTol * std::max(1.0, lat_sum / lat_count);
        }
        if (!ok) ++failures;
    }

    detail = "1000 randomized record sets, failures=" + std::to_string(failures) +
             " (rel tol 1e-9)";
    return failures == 0;
}

// ---- criterion 6: ledger integrity property ---------------------------------

bool criterion_ledger_integrity(std::string& detail) {
    std::mt19937_64 rng(0xD1CE);
    int cases = 0, failures = 0;

    for (int round = 0; round < 100; ++round) {
        TempDir dir;
        auto path = dir.file("blocks.log");
        ledger::WorldState original_state;
        {
            TestClock clock;
            auto lg = make_contract_ledger(clock, path);
            lg->submit("inventory", "CreateDevice", {device_json("dev", "edge-server", false)});
            lg->submit("inventory", "CreateDevice", {device_json("sensor", "sensor", false)});
            int txs = 20 + static_cast<int>(rng() % 15);
            for (int i = 0; i < txs; ++i) {
                clock.set(static_cast<std::int64_t>(1000 * (i + 1)));
                switch (rng() % 3) {
                    case 0: {
                        Json s;
                        s["deviceId"] = "dev";
                        s["cpuPercent"] = static_cast<double>(rng() % 100);
                        s["memoryPercent"] = static_cast<double>(rng() % 100);
                        s["containerCount"] = static_cast<std::int64_t>(rng() % 4);
                        lg->submit("resources", "PutResourceSample", {s.dump()});
                        break;
                    }
                    case 1: {
                        Json row;
                        row["sourceId"] = "dev";
                        row["targetId"] = "sensor";
                        row["latencyMs"] =
                            rng() % 6 == 0 ? -1 : static_cast<std::int64_t>(rng() % 900);
                        lg->submit("latency", "PutLatencyMeasurements",
                                   {Json::array({row}).dump()});
                        break;
                    }
                    case 2: {
                        auto rec = jsonio::parse(
                            lg->evaluate("inventory", "ReadDevice", {"dev"}), "r");
                        rec["name"] = "dev-" + std::to_string(i);
                        lg->submit("inventory", "UpdateDevice", {rec.dump()});
                        break;
                    }
                }
            }
            original_state = lg->state_snapshot();
        }

        ++cases;
        auto file = ledger::read_block_file(path);
        if (!file.intact || file.blocks.size() < 21) {
            ++failures;
            continue;
        }
        if (!ledger::verify_block_file(path).valid) {  // untampered chains verify
            ++failures;
            continue;
        }

        // Replay the log: recorded writes and full re-execution both land on
        // the identical state.
        {
            ledger::ContractRegistry registry;
            contracts::register_contracts(registry);
            auto replayed = ledger::replay_writes(file.blocks);
            auto reexecuted = ledger::replay_by_reexecution(file.blocks, registry);
            if (!(replayed == original_state) || !(reexecuted == original_state)) {
                ++failures;
                continue;
            }
        }

        // Flip one random byte inside a random committed transaction.
        std::size_t block_idx = 1 + rng() % (file.blocks.size() - 1);
        std::string record = ledger::encode_block(file.blocks[block_idx]);
        std::size_t tx_region_begin = 8 + 32 + 4;
        std::size_t tx_region_end = record.size() - 32;
        std::size_t flip =
            tx_region_begin + rng() % (tx_region_end - tx_region_begin);
        {
            std::fstream f(path, std::ios::binary | std::ios::in | std::ios::out);
            std::uint64_t offset = file.record_offsets[block_idx] + flip;
            f.seekg(static_cast<std::streamoff>(offset));
            char c = static_cast<char>(f.get());
            f.seekp(static_cast<std::streamoff>(offset));
            f.put(static_cast<char>(c ^ (1 << (rng() % 8))));
        }
        auto report = ledger::verify_block_file(path);
        if (report.valid || report.first_bad_height != file.blocks[block_idx].height)
            ++failures;
    }

    detail = std::to_string(cases) + " chains (>=21 blocks each), failures=" +
             std::to_string(failures);
    return failures == 0;
}

// ---- criterion 7: probe semantics -------------------------------------------

bool criterion_probe_semantics(std::string& detail) {
    bool ok = true;
    std::string parts;

    for (int d : {0, 50, 200}) {
        netio::EchoServerOptions opts;
        opts.credential_ref = "cred";
        opts.plan = [d] {
            netio::ReplyPlan p;
            p.delay = milliseconds(2 * d);
            return p;
        };
        netio::EchoServer server(std::move(opts));
        server.start();
        daemon::Prober prober(5000);
        for (int i = 0; i < 3; ++i) {
            auto latency = prober.probe_once({"t", server.address(), "cred"});
            if (latency < static_cast<std::int64_t>(2 * d * 0.9) ||
                latency > static_cast<std::int64_t>(2 * d + 250)) {
                ok = false;
                parts += " d=" + std::to_string(d) + " latency=" + std::to_string(latency) + ";";
            }
        }
        server.stop();
    }

    // Unreachable peer.
    std::uint16_t dead_port;
    {
        auto l = netio::Listener::bind("127.0.0.1", 0);
        dead_port = l.port();
    }
    daemon::Prober prober(500);
    auto unreachable =
        prober.probe_once({"t", "127.0.0.1:" + std::to_string(dead_port), "cred"});
    if (unreachable != -1) {
        ok = false;
        parts += " unreachable returned " + std::to_string(unreachable) + ";";
    }

    // Wrong-payload peer.
    netio::EchoServerOptions corrupt_opts;
    corrupt_opts.credential_ref = "cred";
    corrupt_opts.plan = [] {
        netio::ReplyPlan p;
        p.action = netio::ReplyPlan::Action::corrupt;
        return p;
    };
    netio::EchoServer corrupt_server(std::move(corrupt_opts));
    corrupt_server.start();
    auto wrong = prober.probe_once({"t", corrupt_server.address(), "cred"});
    corrupt_server.stop();
    if (wrong != -1) {
        ok = false;
        parts += " wrong-payload returned " + std::to_string(wrong) + ";";
    }

    detail = "d in {0,50,200} within [1.8d, 2d+250ms]; unreachable=-1; wrong-payload=-1" +
             (ok ? std::string() : " |" + parts);
    return ok;
}

// ---- criterion 8: staleness filter ------------------------------------------

bool criterion_staleness(std::string& detail) {
    std::mt19937_64 rng(0x57A1E);
    int violations = 0;
    const std::int64_t now = 3600 * 1000;
    const std::int64_t window_minutes = 10;
    const std::int64_t start = now - window_minutes * 60000;

    for (int round = 0; round < 200; ++round) {
        TestClock clock;
        auto lg = make_contract_ledger(clock);
        lg->submit("inventory", "CreateDevice", {device_json("sensor", "sensor", false)});

        std::map<std::string, bool> has_fresh_success;
        std::map<std::string, bool> has_resources;
        for (int s = 0; s < 4; ++s) {
            std::string id = "srv" + std::to_string(s);
            lg->submit("inventory", "CreateDevice", {device_json(id, "edge-server", false)});
            has_fresh_success[id] = false;
            has_resources[id] = rng() % 4 != 0;
            if (has_resources[id]) {
                clock.set(start + 1000);
                Json sample;
                sample["deviceId"] = id;
                sample["cpuPercent"] = 10.0;
                sample["memoryPercent"] = 10.0;
                sample["containerCount"] = 0;
                lg->submit("resources", "PutResourceSample", {sample.dump()});
            }

            int records = static_cast<int>(rng() % 4);
            for (int r = 0; r < records; ++r) {
                bool in_window = rng() % 2 == 0;
                bool failed = rng() % 2 == 0;
                std::int64_t ts = in_window
                                      ? start + static_cast<std::int64_t>(rng() % 60000)
                                      : start - 1 - static_cast<std::int64_t>(rng() % 60000);
                clock.set(ts);
                Json row;
                row["sourceId"] = id;
                row["targetId"] = "sensor";
                row["latencyMs"] = failed ? -1 : static_cast<std::int64_t>(rng() % 500);
                lg->submit("latency", "PutLatencyMeasurements", {Json::array({row}).dump()});
                if (in_window && !failed) has_fresh_success[id] = true;
            }
        }

        contracts::TaskProperties task;
        try {
            auto payload = lg->evaluate(
                "selection", "SelectOffloadServer",
                {"sensor", task.to_json().dump(), std::to_string(window_minutes),
                 std::to_string(now)});
            for (const auto& e : jsonio::parse(payload, "entries")) {
                std::string id = e["serverId"];
                if (!has_fresh_success[id] || !has_resources[id]) ++violations;
            }
        } catch (const ContractError& e) {
            // No eligible node: legal exactly when nobody has fresh data.
            bool somebody_eligible = false;
            for (const auto& [id, fresh] : has_fresh_success)
                if (fresh && has_resources[id]) somebody_eligible = true;
            if (e.code() != ErrorCode::no_eligible_server || somebody_eligible) ++violations;
        }
    }

    detail = "200 randomized ledgers, stale selections=" + std::to_string(violations);
    return violations == 0;
}

// ---- criterion 9: write/read latency split ----------------------------------

bool criterion_latency_split(std::string& detail) {
    gateway::GatewayConfig cfg;
    cfg.port = 0;
    cfg.block_timeout_ms = 500;  // pinned by the criterion
    gateway::Gateway gw(std::move(cfg));
    gw.start();
    httplib::Client client(gw.url());
    client.set_read_timeout(10, 0);

    auto timed = [&](auto&& fn) {
        auto t0 = steady_clock::now();
        fn();
        return duration<double, std::milli>(steady_clock::now() - t0).count();
    };

    double write_ms = timed([&] {
        auto res = client.Post("/devices", device_json("dev", "edge-server", false),
                               "application/json");
        if (!res || res->status != 201) throw std::runtime_error("write failed");
    });
    double read_ms = timed([&] {
        auto res = client.Get("/devices/dev");
        if (!res || res->status != 200) throw std::runtime_error("read failed");
    });

    auto stats = gw.stats();
    gw.stop();

    bool ok = write_ms >= 250.0 && read_ms < 50.0 && stats.write_count == 1 &&
              stats.read_count == 1 && stats.write_mean_ms >= 250.0 && stats.read_mean_ms < 50.0;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "write=%.1fms (>=250 required), read=%.2fms (<50 required), stats split "
                  "write=%.1f read=%.2f",
                  write_ms, read_ms, stats.write_mean_ms, stats.read_mean_ms);
    detail = buf;
    return ok;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {"1 scenario replay exp1 (ethernet): winner + means within 10% + <60s",
         criterion_exp1},
        {"2 scenario replay exp3 (vpn): winner + means within 10%", criterion_exp3},
        {"3 scenario replay exp5 (mixed 4g): >5x gap + argmin selection", criterion_exp5},
        {"4 selection ordering equals brute-force lexicographic sort", criterion_selection_oracle},
        {"5 analysis averages equal filter-and-mean oracle (1e-9)", criterion_analysis_oracle},
        {"6 ledger integrity: tamper detection + replay determinism",
         criterion_ledger_integrity},
        {"7 probe semantics: delay bounds and -1 sentinels", criterion_probe_semantics},
        {"8 staleness filter: no stale server ever selected", criterion_staleness},
        {"9 write/read latency split at 500ms block timeout", criterion_latency_split},
    };

    int failed = 0;
    for (auto& c : criteria) {
        std::string detail;
        bool ok = false;
        try {
            ok = c.fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("%s criterion %s%s%s\n", ok ? "PASS" : "FAIL", c.name.c_str(),
                    detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failed;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
                criteria.size());
    return failed == 0 ? 0 : 1;
}
