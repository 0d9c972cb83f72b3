#pragma once

#include <set>
#include <string>

#include "edgeledger/sim/scenario.hpp"

namespace edgeledger::sim {

struct RunnerOptions {
    enum class Mode { realtime, virtual_time };
    Mode mode = Mode::realtime;
    // Ledger batching while the scenario runs; small values keep daemon posts
    // snappy at desk scale.
    int block_timeout_ms = 150;
    std::size_t block_max_txs = 10;
    // Servers whose daemon never runs (staleness experiments). The device is
    // still registered in the inventory.
    std::set<std::string> disabled_daemons;
    // Where the realtime ledger file lives; empty uses a fresh temp dir.
    std::filesystem::path work_dir;
};

RunnerOptions::Mode parse_mode(const std::string& name);

// Replays one scenario end to end: fresh purged ledger, device registration,
// collection phase, selection, report.
//
// realtime: an in-process gateway serves HTTP, one daemon per server device
// probes per-link echo listeners over real sockets, ticks are compressed
// wall-clock seconds.
//
// virtual: the same contract pipeline driven by a virtual clock with
// generated probe outcomes; no sockets or threads, reports are byte-identical
// for a given seed.
ScenarioReport run_scenario(const ScenarioSpec& spec, const RunnerOptions& options = {});

}  // namespace edgeledger::sim
