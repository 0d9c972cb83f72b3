#include "edgeledger/sim/linkmodel.hpp"

#include <algorithm>
#include <cstring>

#include "edgeledger/digest.hpp"

namespace edgeledger::sim {

std::uint64_t DeterministicRng::derive_seed(std::uint64_t base, std::string_view a,
                                            std::string_view b) {
    std::string material = std::to_string(base);
    material.push_back('|');
    material.append(a);
    material.push_back('|');
    material.append(b);
    Digest d = sha256(material);
    std::uint64_t seed = 0;
    std::memcpy(&seed, d.data(), sizeof(seed));
    return seed;
}

double DeterministicRng::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double DeterministicRng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

LinkSampler::LinkSampler(std::uint64_t scenario_seed, const ScenarioDevice& server,
                         const ScenarioDevice& sensor)
    : rng_(DeterministicRng::derive_seed(scenario_seed, server.record.id, sensor.record.id)),
      base_round_trip_ms_(2.0 * (server.link.base_one_way_ms + sensor.link.base_one_way_ms)),
      jitter_ms_(server.link.jitter_ms + sensor.link.jitter_ms),
      failure_probability_(1.0 - (1.0 - server.link.failure_probability) *
                                     (1.0 - sensor.link.failure_probability)) {}

LinkSample LinkSampler::next() {
    // Both draws happen on every sample so the stream stays aligned between
    // the realtime and virtual consumers.
    double fail_draw = rng_.uniform01();
    double jitter = rng_.uniform(-jitter_ms_, jitter_ms_);
    LinkSample s;
    s.fail = fail_draw < failure_probability_;
    s.delay_ms = std::max(0.0, base_round_trip_ms_ + jitter);
    return s;
}

SyntheticMeter::SyntheticMeter(std::uint64_t scenario_seed, const ScenarioDevice& device)
    : rng_(DeterministicRng::derive_seed(scenario_seed, device.record.id, "resources")),
      profile_(device.resources) {}

std::optional<daemon::ResourceReading> SyntheticMeter::read() {
    daemon::ResourceReading r;
    r.cpu_percent = std::clamp(
        profile_.cpu_mean + rng_.uniform(-profile_.cpu_jitter, profile_.cpu_jitter), 0.0, 100.0);
    r.memory_percent = std::clamp(
        profile_.mem_mean + rng_.uniform(-profile_.mem_jitter, profile_.mem_jitter), 0.0, 100.0);
    r.container_count = profile_.container_count;
    return r;
}

}  // namespace edgeledger::sim
