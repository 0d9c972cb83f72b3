#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "edgeledger/daemon/meter.hpp"
#include "edgeledger/sim/scenario.hpp"

namespace edgeledger::sim {

// Deterministic stream of draws. mt19937_64 has a standard-specified
// sequence; the uniform mapping is hand-rolled because the library
// distributions are implementation-defined.
class DeterministicRng {
  public:
    explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}

    // Stable per-purpose sub-seed so every (scenario, device, peer) stream is
    // independent of iteration order.
    static std::uint64_t derive_seed(std::uint64_t base, std::string_view a,
                                     std::string_view b = {});

    double uniform01();  // [0, 1) with 53 bits
    double uniform(double lo, double hi);

  private:
    std::mt19937_64 engine_;
};

struct LinkSample {
    bool fail = false;
    double delay_ms = 0.0;  // round-trip injection for the echo reply
};

// Samples the (server link + sensor link) pair. The realtime echo listener
// and the virtual-time runner consume the same stream, draw for draw, so both
// modes see the same generated link behaviour for a given seed.
class LinkSampler {
  public:
    LinkSampler(std::uint64_t scenario_seed, const ScenarioDevice& server,
                const ScenarioDevice& sensor);

    LinkSample next();

  private:
    DeterministicRng rng_;
    double base_round_trip_ms_;
    double jitter_ms_;
    double failure_probability_;
};

// Synthetic per-device resource stream behind the daemon meter interface.
class SyntheticMeter : public daemon::ResourceMeter {
  public:
    SyntheticMeter(std::uint64_t scenario_seed, const ScenarioDevice& device);

    std::optional<daemon::ResourceReading> read() override;

  private:
    DeterministicRng rng_;
    ResourceProfile profile_;
};

}  // namespace edgeledger::sim
