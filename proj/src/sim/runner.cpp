#include "edgeledger/sim/runner.hpp"

#include <httplib.h>

#include <chrono>
#include <cmath>
#include <memory>
#include <mutex>
#include <thread>

#include "edgeledger/contracts/contracts.hpp"
#include "edgeledger/daemon/daemon.hpp"
#include "edgeledger/errors.hpp"
#include "edgeledger/gateway/gateway.hpp"
#include "edgeledger/log.hpp"
#include "edgeledger/netio/echo.hpp"
#include "edgeledger/sim/linkmodel.hpp"

namespace edgeledger::sim {

using contracts::DeviceRole;
using jsonio::Json;
using namespace std::chrono;

namespace {

[[noreturn]] void fail_run(const std::string& message) {
    throw std::runtime_error("scenario run failed: " + message);
}

// The five purge-relevant prefixes must scan empty on a fresh ledger before
// any device registers.
void assert_purged(const ledger::Ledger& ledger) {
    for (const char* prefix : {"device:", "resource:", "latency:", ""}) {
        if (!ledger.range_query(prefix).empty())
            fail_run(std::string("ledger not purged, prefix '") + prefix + "' non-empty");
    }
}

ScenarioReport build_report(const ScenarioSpec& spec, const std::string& mode,
                            const std::string& selection_payload, double read_mean_ms,
                            double write_mean_ms) {
    ScenarioReport report;
    report.scenario = spec.name;
    report.mode = mode;
    report.read_mean_ms = read_mean_ms;
    report.write_mean_ms = write_mean_ms;

    Json entries = jsonio::parse(selection_payload, "selection result");
    std::set<std::string> included;
    for (const auto& ej : entries) {
        auto entry = contracts::SelectionEntry::from_json(ej);
        ServerReportRow row;
        row.server_id = entry.server_id;
        row.mean_latency_ms = entry.avg_latency_ms;
        row.mean_cpu = entry.avg_cpu;
        row.mean_mem = entry.avg_memory;
        included.insert(entry.server_id);
        report.servers.push_back(std::move(row));
    }
    if (report.servers.empty()) fail_run("selection returned no entries");
    report.selected_server_id = report.servers.front().server_id;
    for (const auto* server : spec.servers())
        if (!included.count(server->record.id))
            report.excluded_servers.push_back(server->record.id);
    return report;
}

int tick_count(const ScenarioSpec& spec) {
    // Ticks fire at t = 0, tick, 2*tick, ... strictly inside the collection
    // phase.
    return (spec.collection_seconds + spec.tick_seconds - 1) / spec.tick_seconds;
}

ScenarioReport run_virtual(const ScenarioSpec& spec, const RunnerOptions& options) {
    auto vnow = std::make_shared<std::int64_t>(0);

    ledger::ContractRegistry registry;
    contracts::register_contracts(registry);
    ledger::LedgerOptions opts;
    opts.block_max_txs = 1;  // inline commit, no cutter thread needed
    opts.auto_cut = false;
    opts.clock = [vnow] { return *vnow; };
    ledger::Ledger ledger(std::move(registry), std::move(opts));
    assert_purged(ledger);

    for (const auto& d : spec.devices)
        ledger.submit(contracts::kInventoryContract, "CreateDevice",
                      {d.record.to_json().dump()});

    // Per-link and per-device streams, fixed iteration order.
    auto servers = spec.servers();
    auto sensors = spec.sensors();
    std::vector<std::unique_ptr<LinkSampler>> links;       // server-major
    std::vector<std::unique_ptr<SyntheticMeter>> meters;  // per server
    for (const auto* server : servers) {
        for (const auto* sensor : sensors)
            links.push_back(std::make_unique<LinkSampler>(spec.rng_seed, *server, *sensor));
        meters.push_back(std::make_unique<SyntheticMeter>(spec.rng_seed, *server));
    }

    int ticks = tick_count(spec);
    for (int k = 0; k < ticks; ++k) {
        *vnow = static_cast<std::int64_t>(k) * spec.tick_seconds * 1000;
        for (std::size_t si = 0; si < servers.size(); ++si) {
            const auto* server = servers[si];
            if (options.disabled_daemons.count(server->record.id)) continue;
            Json batch = Json::array();
            for (std::size_t ti = 0; ti < sensors.size(); ++ti) {
                LinkSample sample = links[si * sensors.size() + ti]->next();
                Json row;
                row["sourceId"] = server->record.id;
                row["targetId"] = sensors[ti]->record.id;
                row["latencyMs"] =
                    sample.fail ? -1 : static_cast<std::int64_t>(std::llround(sample.delay_ms));
                batch.push_back(std::move(row));
            }
            ledger.submit(contracts::kLatencyContract, "PutLatencyMeasurements", {batch.dump()});

            auto reading = meters[si]->read();
            Json sample;
            sample["deviceId"] = server->record.id;
            sample["cpuPercent"] = reading->cpu_percent;
            sample["memoryPercent"] = reading->memory_percent;
            sample["containerCount"] = reading->container_count;
            ledger.submit(contracts::kResourcesContract, "PutResourceSample", {sample.dump()});
        }
    }

    *vnow = static_cast<std::int64_t>(spec.collection_seconds) * 1000;
    contracts::TaskProperties task;  // CPU-only selection
    std::string payload = ledger.evaluate(
        contracts::kSelectionContract, "SelectOffloadServer",
        {sensors.front()->record.id, task.to_json().dump(),
         std::to_string(spec.selection_window_minutes), std::to_string(*vnow)});

    return build_report(spec, "virtual", payload, 0.0, 0.0);
}

ScenarioReport run_realtime(const ScenarioSpec& spec, const RunnerOptions& options) {
    namespace fs = std::filesystem;
    fs::path work = options.work_dir;
    if (work.empty()) {
        work = fs::temp_directory_path() /
               ("edgeledger-sim-" +
                std::to_string(
                    duration_cast<nanoseconds>(steady_clock::now().time_since_epoch()).count()));
    }
    fs::create_directories(work);

    auto servers = spec.servers();
    auto sensors = spec.sensors();

    // Per-(server, sensor) echo listeners carrying that link pair's delay
    // model; the daemon's probe path runs unmodified against them.
    struct Link {
        std::unique_ptr<netio::EchoServer> echo;
        std::unique_ptr<LinkSampler> sampler;
        std::mutex mu;
    };
    std::vector<std::unique_ptr<Link>> links;
    std::map<std::string, std::map<std::string, std::string>> overrides;
    std::map<std::string, std::string> sensor_addresses;
    double max_delay_ms = 0.0;
    for (const auto* server : servers) {
        for (const auto* sensor : sensors) {
            auto link = std::make_unique<Link>();
            link->sampler = std::make_unique<LinkSampler>(spec.rng_seed, *server, *sensor);
            netio::EchoServerOptions echo_opts;
            echo_opts.credential_ref = sensor->record.credential_ref;
            Link* raw = link.get();
            echo_opts.plan = [raw] {
                std::lock_guard<std::mutex> lock(raw->mu);
                LinkSample s = raw->sampler->next();
                netio::ReplyPlan plan;
                plan.delay = milliseconds(static_cast<std::int64_t>(std::llround(s.delay_ms)));
                plan.action =
                    s.fail ? netio::ReplyPlan::Action::corrupt : netio::ReplyPlan::Action::echo;
                return plan;
            };
            link->echo = std::make_unique<netio::EchoServer>(std::move(echo_opts));
            link->echo->start();
            overrides[server->record.id][sensor->record.id] = link->echo->address();
            sensor_addresses.emplace(sensor->record.id, link->echo->address());
            max_delay_ms = std::max(max_delay_ms,
                                    2.0 * (server->link.base_one_way_ms +
                                           sensor->link.base_one_way_ms) +
                                        server->link.jitter_ms + sensor->link.jitter_ms);
            links.push_back(std::move(link));
        }
    }

    gateway::GatewayConfig gw_config;
    gw_config.port = 0;
    gw_config.ledger_path = work / "blocks.log";
    gw_config.block_max_txs = options.block_max_txs;
    gw_config.block_timeout_ms = options.block_timeout_ms;
    gw_config.default_window_minutes = static_cast<int>(spec.selection_window_minutes);
    gw_config.target_overrides = overrides;
    gateway::Gateway gw(std::move(gw_config));
    assert_purged(gw.ledger());
    gw.start();

    httplib::Client client(gw.url());
    client.set_read_timeout(30, 0);

    for (const auto& d : spec.devices) {
        contracts::DeviceRecord record = d.record;
        // Sensor inventory addresses point at a live listener for that sensor.
        if (record.role == DeviceRole::sensor) record.address = sensor_addresses[record.id];
        auto res = client.Post("/devices", record.to_json().dump(), "application/json");
        if (!res || res->status != 201)
            fail_run("device registration failed for " + record.id);
    }

    int probe_timeout_ms = std::max(5000, static_cast<int>(max_delay_ms) + 2000);
    std::vector<std::unique_ptr<daemon::Daemon>> daemons;
    for (const auto* server : servers) {
        if (options.disabled_daemons.count(server->record.id)) continue;
        daemon::DaemonConfig cfg;
        cfg.device_id = server->record.id;
        cfg.gateway_url = gw.url();
        cfg.interval_seconds = spec.tick_seconds;
        cfg.probe_timeout_ms = probe_timeout_ms;
        auto meter = std::make_shared<SyntheticMeter>(spec.rng_seed, *server);
        daemons.push_back(std::make_unique<daemon::Daemon>(std::move(cfg), std::move(meter)));
    }
    for (auto& d : daemons) d->start();

    std::this_thread::sleep_for(seconds(spec.collection_seconds));
    for (auto& d : daemons) d->stop();
    for (auto& link : links) link->echo->stop();

    Json select_body;
    select_body["targetId"] = sensors.front()->record.id;
    select_body["requiresGpu"] = false;  // CPU-only selection
    select_body["windowMinutes"] = spec.selection_window_minutes;
    auto select_res = client.Post("/select", select_body.dump(), "application/json");
    if (!select_res || select_res->status != 200)
        fail_run("selection failed (status " +
                 (select_res ? std::to_string(select_res->status) : std::string("none")) +
                 (select_res ? ", " + select_res->body : std::string()) + ")");

    auto stats = gw.stats();
    ScenarioReport report = build_report(spec, "realtime", select_res->body, stats.read_mean_ms,
                                         stats.write_mean_ms);
    gw.stop();
    return report;
}

}  // namespace

RunnerOptions::Mode parse_mode(const std::string& name) {
    if (name == "realtime") return RunnerOptions::Mode::realtime;
    if (name == "virtual") return RunnerOptions::Mode::virtual_time;
    throw ContractError(ErrorCode::validation, "unknown sim mode: " + name);
}

ScenarioReport run_scenario(const ScenarioSpec& spec, const RunnerOptions& options) {
    if (options.mode == RunnerOptions::Mode::virtual_time) return run_virtual(spec, options);
    return run_realtime(spec, options);
}

}  // namespace edgeledger::sim
