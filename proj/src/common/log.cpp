#include "edgeledger/log.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>

namespace edgeledger::log {

namespace {
std::atomic<Level> g_level{Level::warn};
std::mutex g_mu;

const char* level_tag(Level lv) {
    switch (lv) {
        case Level::error: return "ERROR";
        case Level::warn: return "WARN";
        case Level::info: return "INFO";
        case Level::debug: return "DEBUG";
    }
    return "?";
}
}  // namespace

void set_level(Level level) { g_level.store(level); }
Level level() { return g_level.load(); }

bool parse_level(const std::string& name, Level& out) {
    if (name == "error") out = Level::error;
    else if (name == "warn") out = Level::warn;
    else if (name == "info") out = Level::info;
    else if (name == "debug") out = Level::debug;
    else return false;
    return true;
}

void write(Level level, const std::string& message) {
    if (level > g_level.load()) return;
    auto now = std::chrono::system_clock::now();
    auto t = std::chrono::system_clock::to_time_t(now);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch())
                  .count() %
              1000;
    std::tm tm{};
    localtime_r(&t, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%H:%M:%S", &tm);
    std::lock_guard<std::mutex> lock(g_mu);
    std::fprintf(stderr, "%s.%03d %-5s %s\n", stamp, static_cast<int>(ms), level_tag(level),
                 message.c_str());
}

}  // namespace edgeledger::log
