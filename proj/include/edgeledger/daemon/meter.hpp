#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>

namespace edgeledger::daemon {

struct ResourceReading {
    double cpu_percent = 0.0;
    double memory_percent = 0.0;
    std::int64_t container_count = 0;
};

// Source of one resource sample per tick. The host meter reads the OS; the
// simulator plugs in synthetic profiles behind the same interface.
class ResourceMeter {
  public:
    virtual ~ResourceMeter() = default;
    // nullopt means the metric source was unavailable this tick.
    virtual std::optional<ResourceReading> read() = 0;
};

// Linux /proc-based meter. CPU usage is the busy share of the interval since
// the previous read (a short priming interval on the first call). The
// workload counter is pluggable; without one, container count is 0.
class HostMeter : public ResourceMeter {
  public:
    explicit HostMeter(std::function<std::int64_t()> workload_counter = {});
    std::optional<ResourceReading> read() override;

  private:
    std::function<std::int64_t()> workload_counter_;
    std::uint64_t prev_busy_ = 0;
    std::uint64_t prev_total_ = 0;
    bool primed_ = false;
};

// Fixed-value meter for tests.
class FixedMeter : public ResourceMeter {
  public:
    explicit FixedMeter(ResourceReading reading) : reading_(reading) {}
    std::optional<ResourceReading> read() override { return reading_; }

  private:
    ResourceReading reading_;
};

}  // namespace edgeledger::daemon
