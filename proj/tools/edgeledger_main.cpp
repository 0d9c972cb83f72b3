#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <thread>

#include "edgeledger/contracts/contracts.hpp"
#include "edgeledger/daemon/daemon.hpp"
#include "edgeledger/gateway/gateway.hpp"
#include "edgeledger/ledger/ledger.hpp"
#include "edgeledger/log.hpp"
#include "edgeledger/sim/runner.hpp"

namespace {

std::atomic<bool> g_stop{false};

void handle_signal(int) { g_stop.store(true); }

void install_signal_handlers() {
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
}

void wait_for_signal() {
    using namespace std::chrono_literals;
    while (!g_stop.load()) std::this_thread::sleep_for(100ms);
}

int run_gateway(const std::string& listen, const std::string& ledger_path, int block_timeout_ms,
                int block_max_txs, const std::vector<std::string>& notify_urls) {
    std::string host;
    std::uint16_t port = 0;
    if (!edgeledger::contracts::parse_host_port(listen, host, port)) {
        std::cerr << "bad --listen address: " << listen << "\n";
        return 1;
    }
    edgeledger::gateway::GatewayConfig config;
    config.listen_host = host;
    config.port = port;
    config.ledger_path = ledger_path;
    config.block_timeout_ms = block_timeout_ms;
    config.block_max_txs = static_cast<std::size_t>(block_max_txs);
    config.notify_urls = notify_urls;
    edgeledger::gateway::Gateway gw(std::move(config));
    gw.start();
    std::cout << "gateway listening on " << gw.url() << "\n";
    install_signal_handlers();
    wait_for_signal();
    gw.stop();
    return 0;
}

int run_daemon(const edgeledger::daemon::DaemonConfig& config) {
    edgeledger::daemon::Daemon daemon(config);
    daemon.start();
    install_signal_handlers();
    wait_for_signal();
    daemon.stop();
    return 0;
}

int run_sim(const std::string& scenario_path, const std::string& expect_path,
            const std::string& out_path, const std::string& mode) {
    namespace sim = edgeledger::sim;
    sim::ScenarioSpec spec = sim::load_scenario(scenario_path);
    sim::RunnerOptions options;
    options.mode = sim::parse_mode(mode);
    sim::ScenarioReport report = sim::run_scenario(spec, options);

    std::string text = report.dump();
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        out << text;
        if (!out) {
            std::cerr << "cannot write report to " << out_path << "\n";
            return 1;
        }
    }

    if (!expect_path.empty()) {
        sim::Expectation expected = sim::load_expectation(expect_path);
        sim::CompareResult result = sim::compare_to_expectation(report, expected);
        for (const auto& diff : result.diffs) std::cerr << "mismatch: " << diff << "\n";
        if (!result.pass) return 1;
        std::cerr << "expectation satisfied\n";
    }
    return 0;
}

int run_verify(const std::string& ledger_path) {
    auto report = edgeledger::ledger::verify_block_file(ledger_path);
    if (report.valid) {
        std::cout << "chain valid\n";
        return 0;
    }
    std::cout << "chain INVALID at height " << report.first_bad_height << ": " << report.detail
              << "\n";
    return 1;
}

int run_query(const std::string& ledger_path, const std::string& prefix) {
    edgeledger::ledger::ContractRegistry registry;
    edgeledger::contracts::register_contracts(registry);
    edgeledger::ledger::LedgerOptions opts;
    opts.path = ledger_path;
    opts.auto_cut = false;
    edgeledger::ledger::Ledger ledger(std::move(registry), std::move(opts));
    for (const auto& [key, value] : ledger.range_query(prefix))
        std::cout << key << "\t" << value << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"edgeledger: ledger-backed edge offload control plane"};
    app.name("edgeledger");
    app.require_subcommand(1);
    std::string log_level = "warn";
    app.add_option("--log-level", log_level, "log verbosity: error|warn|info|debug")
        ->capture_default_str();

    // gateway
    auto* gateway_cmd = app.add_subcommand("gateway", "run the HTTP gateway and ledger");
    std::string gw_listen = "127.0.0.1:8080";
    std::string gw_ledger_path;
    int gw_block_timeout_ms = 500;
    int gw_block_max_txs = 10;
    std::vector<std::string> gw_notify_urls;
    gateway_cmd->add_option("--listen", gw_listen, "listen address host:port")
        ->capture_default_str()
        ->envname("EDGELEDGER_LISTEN");
    gateway_cmd->add_option("--ledger-path", gw_ledger_path, "block log file")
        ->required()
        ->envname("EDGELEDGER_LEDGER_PATH");
    gateway_cmd
        ->add_option("--block-timeout-ms", gw_block_timeout_ms,
                     "cut a block after this long with a non-empty queue")
        ->capture_default_str()
        ->envname("EDGELEDGER_BLOCK_TIMEOUT_MS");
    gateway_cmd->add_option("--block-max-txs", gw_block_max_txs, "cut a block at this many txs")
        ->capture_default_str()
        ->envname("EDGELEDGER_BLOCK_MAX_TXS");
    gateway_cmd
        ->add_option("--notify-url", gw_notify_urls,
                     "URL receiving the selected head entry (repeatable)")
        ->envname("EDGELEDGER_NOTIFY_URL");

    // daemon
    auto* daemon_cmd = app.add_subcommand("daemon", "run the per-device agent");
    edgeledger::daemon::DaemonConfig daemon_config;
    daemon_cmd->add_option("--device-id", daemon_config.device_id, "this device's inventory id")
        ->required()
        ->envname("EDGELEDGER_DEVICE_ID");
    daemon_cmd->add_option("--gateway-url", daemon_config.gateway_url, "gateway base URL")
        ->required()
        ->envname("EDGELEDGER_GATEWAY_URL");
    daemon_cmd
        ->add_option("--interval-seconds", daemon_config.interval_seconds,
                     "tick cadence in seconds")
        ->capture_default_str()
        ->envname("EDGELEDGER_INTERVAL_SECONDS");
    daemon_cmd
        ->add_option("--listen", daemon_config.listen_address,
                     "echo listener host:port for answering probes")
        ->envname("EDGELEDGER_DAEMON_LISTEN");
    daemon_cmd
        ->add_option("--probe-timeout-ms", daemon_config.probe_timeout_ms,
                     "per-probe deadline in milliseconds")
        ->capture_default_str()
        ->envname("EDGELEDGER_PROBE_TIMEOUT_MS");

    // sim
    auto* sim_cmd = app.add_subcommand("sim", "run one scenario and exit");
    std::string sim_scenario, sim_expect, sim_out;
    std::string sim_mode = "realtime";
    sim_cmd->add_option("--scenario", sim_scenario, "scenario file")->required();
    sim_cmd->add_option("--expect", sim_expect,
                        "expectation file; exit nonzero when the report misses it");
    sim_cmd->add_option("--out", sim_out, "write the report here instead of stdout");
    sim_cmd->add_option("--mode", sim_mode, "realtime|virtual")->capture_default_str();

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "verify block log integrity");
    std::string verify_path;
    verify_cmd->add_option("--ledger-path", verify_path, "block log file")->required();

    // query
    auto* query_cmd = app.add_subcommand("query", "prefix-scan the world state");
    std::string query_path, query_prefix;
    query_cmd->add_option("--ledger-path", query_path, "block log file")->required();
    query_cmd->add_option("--prefix", query_prefix, "key prefix (default: everything)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage errors exit 2
    }

    edgeledger::log::Level level;
    if (!edgeledger::log::parse_level(log_level, level)) {
        std::cerr << "bad --log-level: " << log_level << "\n";
        return 2;
    }
    edgeledger::log::set_level(level);

    try {
        if (gateway_cmd->parsed())
            return run_gateway(gw_listen, gw_ledger_path, gw_block_timeout_ms, gw_block_max_txs,
                               gw_notify_urls);
        if (daemon_cmd->parsed()) return run_daemon(daemon_config);
        if (sim_cmd->parsed()) return run_sim(sim_scenario, sim_expect, sim_out, sim_mode);
        if (verify_cmd->parsed()) return run_verify(verify_path);
        if (query_cmd->parsed()) return run_query(query_path, query_prefix);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
