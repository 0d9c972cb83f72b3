#include "edgeledger/gateway/gateway.hpp"

#include <httplib.h>

#include <chrono>

#include "edgeledger/contracts/contracts.hpp"
#include "edgeledger/log.hpp"

namespace edgeledger::gateway {

using contracts::DeviceRecord;
using jsonio::Json;
using namespace std::chrono;

struct Gateway::Impl {
    httplib::Server server;
};

namespace {

int status_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::validation: return 400;
        case ErrorCode::read_only_violation: return 400;
        case ErrorCode::not_found: return 404;
        case ErrorCode::unknown_operation: return 404;
        case ErrorCode::no_eligible_server: return 404;
        case ErrorCode::duplicate: return 409;
        case ErrorCode::unavailable: return 503;
    }
    return 500;
}

void send_error(httplib::Response& res, int status, const std::string& code,
                const std::string& message) {
    Json body;
    body["httpStatus"] = status;
    body["code"] = code;
    body["message"] = message;
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

// Splits an absolute http URL into client base and request path.
std::pair<std::string, std::string> split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    std::size_t path_start =
        scheme_end == std::string::npos ? url.find('/') : url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

Gateway::Gateway(GatewayConfig config) : impl_(new Impl), config_(std::move(config)) {
    ledger::ContractRegistry registry;
    contracts::register_contracts(registry);
    ledger::LedgerOptions opts;
    opts.path = config_.ledger_path;
    opts.block_max_txs = config_.block_max_txs;
    opts.block_timeout = milliseconds(config_.block_timeout_ms);
    opts.clock = config_.clock;
    ledger_ = std::make_unique<ledger::Ledger>(std::move(registry), std::move(opts));
}

Gateway::~Gateway() { stop(); }

std::string Gateway::url() const {
    return "http://" + config_.listen_host + ":" + std::to_string(port_);
}

void Gateway::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
    if (server_thread_.joinable()) server_thread_.join();
}

void Gateway::start() {
    auto& svr = impl_->server;

    // Runs a handler with uniform timing and error mapping. Only successful
    // responses enter the timing stats.
    auto guarded = [this](OpKind kind, httplib::Response& res, auto&& fn) {
        auto t0 = steady_clock::now();
        try {
            fn();
            double elapsed =
                duration_cast<duration<double, std::milli>>(steady_clock::now() - t0).count();
            stats_.record(kind, elapsed);
        } catch (const ContractError& e) {
            send_error(res, status_for(e.code()), error_code_name(e.code()), e.what());
        } catch (const std::exception& e) {
            send_error(res, 500, "internal", e.what());
        }
    };

    svr.Post("/devices", [this, guarded](const httplib::Request& req, httplib::Response& res) {
        guarded(OpKind::write, res, [&] {
            auto tx = ledger_->submit(contracts::kInventoryContract, "CreateDevice", {req.body});
            Json body;
            body["id"] = tx.writes.empty() ? "" : DeviceRecord::parse(tx.writes[0].value).id;
            res.status = 201;
            res.set_content(body.dump(), "application/json");
        });
    });

    svr.Get(R"(/devices/([^/]+))", [this, guarded](const httplib::Request& req,
                                                   httplib::Response& res) {
        guarded(OpKind::read, res, [&] {
            std::string payload =
                ledger_->evaluate(contracts::kInventoryContract, "ReadDevice", {req.matches[1]});
            res.set_content(payload, "application/json");
        });
    });

    svr.Put(R"(/devices/([^/]+))", [this, guarded](const httplib::Request& req,
                                                   httplib::Response& res) {
        guarded(OpKind::write, res, [&] {
            DeviceRecord record = DeviceRecord::parse(req.body);
            if (record.id != req.matches[1])
                throw ContractError(ErrorCode::validation,
                                    "record id does not match the path id");
            ledger_->submit(contracts::kInventoryContract, "UpdateDevice", {req.body});
            Json body;
            body["id"] = record.id;
            res.set_content(body.dump(), "application/json");
        });
    });

    svr.Delete(R"(/devices/([^/]+))", [this, guarded](const httplib::Request& req,
                                                      httplib::Response& res) {
        guarded(OpKind::write, res, [&] {
            std::string id = req.matches[1];
            ledger_->submit(contracts::kInventoryContract, "DeleteDevice", {id});
            Json body;
            body["id"] = id;
            res.set_content(body.dump(), "application/json");
        });
    });

    svr.Get("/devices", [this, guarded](const httplib::Request& req, httplib::Response& res) {
        guarded(OpKind::read, res, [&] {
            if (req.get_param_value("role") != "server")
                throw ContractError(ErrorCode::validation,
                                    "expected query parameter role=server");
            bool gpu = req.get_param_value("gpu") == "true";
            std::string payload = ledger_->evaluate(
                contracts::kInventoryContract, gpu ? "GetServerListGPU" : "GetServerList", {});
            res.set_content(payload, "application/json");
        });
    });

    svr.Get("/targets", [this, guarded](const httplib::Request& req, httplib::Response& res) {
        guarded(OpKind::read, res, [&] {
            std::string source = req.get_param_value("source");
            if (source.empty())
                throw ContractError(ErrorCode::validation, "missing query parameter source");
            std::string record_json =
                ledger_->evaluate(contracts::kInventoryContract, "ReadDevice", {source});
            DeviceRecord source_record = DeviceRecord::parse(record_json);
            if (source_record.role != contracts::DeviceRole::edge_server)
                throw ContractError(ErrorCode::validation,
                                    "probe source must be an edge-server: " + source);

            auto overrides = config_.target_overrides.find(source);
            Json out = Json::array();
            ledger::WorldState state = ledger_->state_snapshot();
            for (const auto& sensor : contracts::sensor_list(state)) {
                Json t;
                t["targetId"] = sensor.id;
                std::string address = sensor.address;
                if (overrides != config_.target_overrides.end()) {
                    auto it = overrides->second.find(sensor.id);
                    if (it != overrides->second.end()) address = it->second;
                }
                t["address"] = address;
                t["credentialRef"] = sensor.credential_ref;
                out.push_back(std::move(t));
            }
            res.set_content(out.dump(), "application/json");
        });
    });

    svr.Post("/resources", [this, guarded](const httplib::Request& req, httplib::Response& res) {
        guarded(OpKind::write, res, [&] {
            auto tx =
                ledger_->submit(contracts::kResourcesContract, "PutResourceSample", {req.body});
            Json body;
            body["key"] = tx.writes.empty() ? "" : tx.writes[0].key;
            res.status = 201;
            res.set_content(body.dump(), "application/json");
        });
    });

    svr.Post("/latency", [this, guarded](const httplib::Request& req, httplib::Response& res) {
        guarded(OpKind::write, res, [&] {
            auto tx = ledger_->submit(contracts::kLatencyContract, "PutLatencyMeasurements",
                                      {req.body});
            Json body;
            body["stored"] = tx.writes.size();
            res.status = 201;
            res.set_content(body.dump(), "application/json");
        });
    });

    svr.Post("/select", [this, guarded](const httplib::Request& req, httplib::Response& res) {
        guarded(OpKind::read, res, [&] {
            const char* what = "select request";
            Json body = jsonio::parse(req.body, what);
            jsonio::reject_unknown_fields(body, {"targetId", "requiresGpu", "windowMinutes"},
                                          what);
            std::string target_id = jsonio::require_string(body, "targetId", what);
            contracts::TaskProperties task;
            if (body.contains("requiresGpu"))
                task.requires_gpu = jsonio::require_bool(body, "requiresGpu", what);
            std::int64_t window = config_.default_window_minutes;
            if (body.contains("windowMinutes"))
                window = jsonio::require_int(body, "windowMinutes", what);
            std::int64_t now_ms = ledger_->options().clock();

            std::string payload = ledger_->evaluate(
                contracts::kSelectionContract, "SelectOffloadServer",
                {target_id, task.to_json().dump(), std::to_string(window),
                 std::to_string(now_ms)});
            res.set_content(payload, "application/json");

            Json entries = jsonio::parse(payload, "selection result");
            if (!entries.empty()) notify_selection(entries[0].dump());
        });
    });

    svr.Get("/stats", [this](const httplib::Request&, httplib::Response& res) {
        res.set_content(stats_.to_json().dump(), "application/json");
    });

    if (config_.port == 0) {
        int bound = svr.bind_to_any_port(config_.listen_host);
        if (bound <= 0) throw std::runtime_error("gateway: cannot bind any port");
        port_ = static_cast<std::uint16_t>(bound);
    } else {
        if (!svr.bind_to_port(config_.listen_host, config_.port))
            throw std::runtime_error("gateway: cannot bind " + config_.listen_host + ":" +
                                     std::to_string(config_.port));
        port_ = config_.port;
    }
    server_thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
    svr.wait_until_ready();
    log::info("gateway listening on ", url());
}

void Gateway::notify_selection(const std::string& head_entry_json) {
    for (const auto& url : config_.notify_urls) {
        auto [base, path] = split_url(url);
        httplib::Client client(base);
        client.set_connection_timeout(2, 0);
        client.set_read_timeout(2, 0);
        auto res = client.Post(path, head_entry_json, "application/json");
        if (!res) log::warn("selection notification to ", url, " failed");
    }
}

}  // namespace edgeledger::gateway
