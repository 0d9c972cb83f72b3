#include "edgeledger/daemon/meter.hpp"

#include <chrono>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>

#include "edgeledger/log.hpp"

namespace edgeledger::daemon {

namespace {

struct CpuCounters {
    std::uint64_t busy = 0;
    std::uint64_t total = 0;
};

std::optional<CpuCounters> read_cpu_counters() {
    std::ifstream in("/proc/stat");
    std::string label;
    if (!(in >> label) || label != "cpu") return std::nullopt;
    std::uint64_t user, nice, system, idle, iowait = 0, irq = 0, softirq = 0, steal = 0;
    if (!(in >> user >> nice >> system >> idle)) return std::nullopt;
    in >> iowait >> irq >> softirq >> steal;
    CpuCounters c;
    c.total = user + nice + system + idle + iowait + irq + softirq + steal;
    c.busy = c.total - idle - iowait;
    return c;
}

std::optional<double> read_memory_percent() {
    std::ifstream in("/proc/meminfo");
    std::string line;
    std::uint64_t total_kb = 0, available_kb = 0;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string key;
        std::uint64_t value;
        if (!(ls >> key >> value)) continue;
        if (key == "MemTotal:") total_kb = value;
        if (key == "MemAvailable:") available_kb = value;
    }
    if (total_kb == 0) return std::nullopt;
    return 100.0 * static_cast<double>(total_kb - available_kb) / static_cast<double>(total_kb);
}

}  // namespace

HostMeter::HostMeter(std::function<std::int64_t()> workload_counter)
    : workload_counter_(std::move(workload_counter)) {}

std::optional<ResourceReading> HostMeter::read() {
    if (!primed_) {
        auto first = read_cpu_counters();
        if (!first) {
            log::warn("cpu counters unavailable");
            return std::nullopt;
        }
        prev_busy_ = first->busy;
        prev_total_ = first->total;
        primed_ = true;
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }

    auto counters = read_cpu_counters();
    auto memory = read_memory_percent();
    if (!counters || !memory) {
        log::warn("host metrics unavailable, skipping sample");
        return std::nullopt;
    }

    std::uint64_t busy_delta = counters->busy - prev_busy_;
    std::uint64_t total_delta = counters->total - prev_total_;
    prev_busy_ = counters->busy;
    prev_total_ = counters->total;

    ResourceReading reading;
    reading.cpu_percent =
        total_delta == 0 ? 0.0
                         : 100.0 * static_cast<double>(busy_delta) /
                               static_cast<double>(total_delta);
    if (reading.cpu_percent < 0.0) reading.cpu_percent = 0.0;
    if (reading.cpu_percent > 100.0) reading.cpu_percent = 100.0;
    reading.memory_percent = *memory;
    reading.container_count = workload_counter_ ? workload_counter_() : 0;
    return reading;
}

}  // namespace edgeledger::daemon
