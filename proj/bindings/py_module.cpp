#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "edgeledger/contracts/contracts.hpp"
#include "edgeledger/ledger/ledger.hpp"
#include "edgeledger/sim/runner.hpp"
#include "edgeledger/sim/scenario.hpp"

namespace py = pybind11;

using edgeledger::ContractError;
using edgeledger::ledger::ContractRegistry;
using edgeledger::ledger::Ledger;
using edgeledger::ledger::LedgerOptions;

namespace {

std::unique_ptr<Ledger> open_ledger(const std::filesystem::path& path, std::size_t block_max_txs,
                                    int block_timeout_ms) {
    ContractRegistry registry;
    edgeledger::contracts::register_contracts(registry);
    LedgerOptions opts;
    opts.path = path;
    opts.block_max_txs = block_max_txs;
    opts.block_timeout = std::chrono::milliseconds(block_timeout_ms);
    return std::make_unique<Ledger>(std::move(registry), std::move(opts));
}

}  // namespace

PYBIND11_MODULE(_edgeledger, m) {
    m.doc() = "edgeledger core: minimal permissioned ledger with edge offload contracts";

    py::register_exception<ContractError>(m, "ContractError");

    py::class_<Ledger>(m, "Ledger")
        .def(py::init([](std::optional<std::filesystem::path> path, std::size_t block_max_txs,
                         int block_timeout_ms) {
                 return open_ledger(path.value_or(std::filesystem::path{}), block_max_txs,
                                    block_timeout_ms);
             }),
             py::arg("path") = py::none(), py::arg("block_max_txs") = 1,
             py::arg("block_timeout_ms") = 500,
             "Opens (or creates) a ledger; path=None stays in memory.")
        .def(
            "submit",
            [](Ledger& self, const std::string& contract, const std::string& operation,
               const std::vector<std::string>& args) {
                edgeledger::ledger::Transaction tx;
                {
                    py::gil_scoped_release release;
                    tx = self.submit(contract, operation, args);
                }
                py::dict out;
                out["txId"] = tx.tx_id;
                out["timestampMs"] = tx.timestamp_ms;
                py::list writes;
                for (const auto& w : tx.writes) {
                    py::dict wd;
                    wd["key"] = w.key;
                    wd["value"] = w.value;
                    wd["isDelete"] = w.is_delete;
                    writes.append(wd);
                }
                out["writes"] = writes;
                return out;
            },
            py::arg("contract"), py::arg("operation"), py::arg("args"),
            "Executes a write transaction and blocks until its block commits.")
        .def(
            "evaluate",
            [](const Ledger& self, const std::string& contract, const std::string& operation,
               const std::vector<std::string>& args) {
                return self.evaluate(contract, operation, args);
            },
            py::arg("contract"), py::arg("operation"), py::arg("args"),
            "Runs a read-only operation against the committed state.")
        .def(
            "range_query",
            [](const Ledger& self, const std::string& prefix) {
                return self.range_query(prefix);
            },
            py::arg("prefix") = std::string{})
        .def("cut_block",
             [](Ledger& self) {
                 auto block = self.cut_block();
                 return block ? py::int_(block->height) : py::int_(-1);
             })
        .def("verify",
             [](const Ledger& self) {
                 auto report = self.verify_chain();
                 py::dict out;
                 out["valid"] = report.valid;
                 out["firstBadHeight"] = report.first_bad_height;
                 out["detail"] = report.detail;
                 return out;
             })
        .def("height", &Ledger::height);

    m.def("verify_block_file", [](const std::filesystem::path& path) {
        auto report = edgeledger::ledger::verify_block_file(path);
        py::dict out;
        out["valid"] = report.valid;
        out["firstBadHeight"] = report.first_bad_height;
        out["detail"] = report.detail;
        return out;
    });

    m.def(
        "run_scenario",
        [](const std::filesystem::path& scenario_path, const std::string& mode) {
            auto spec = edgeledger::sim::load_scenario(scenario_path);
            edgeledger::sim::RunnerOptions options;
            options.mode = edgeledger::sim::parse_mode(mode);
            return edgeledger::sim::run_scenario(spec, options).dump();
        },
        py::arg("scenario_path"), py::arg("mode") = "virtual",
        py::call_guard<py::gil_scoped_release>(),
        "Runs one scenario file and returns the report as a JSON string.");

    m.def(
        "compare_report",
        [](const std::string& report_json, const std::filesystem::path& expectation_path) {
            auto report = edgeledger::sim::ScenarioReport::from_json(
                edgeledger::jsonio::parse(report_json, "report"));
            auto expectation = edgeledger::sim::load_expectation(expectation_path);
            auto result = edgeledger::sim::compare_to_expectation(report, expectation);
            py::dict out;
            out["pass"] = result.pass;
            out["diffs"] = result.diffs;
            return out;
        },
        py::arg("report_json"), py::arg("expectation_path"));
}
