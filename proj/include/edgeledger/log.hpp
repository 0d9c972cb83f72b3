#pragma once

#include <mutex>
#include <sstream>
#include <string>

namespace edgeledger::log {

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

void set_level(Level level);
Level level();
bool parse_level(const std::string& name, Level& out);

void write(Level level, const std::string& message);

namespace detail {
template <typename... Args>
std::string join(Args&&... args) {
    std::ostringstream os;
    (os << ... << args);
    return os.str();
}
}  // namespace detail

template <typename... Args>
void error(Args&&... args) {
    write(Level::error, detail::join(std::forward<Args>(args)...));
}
template <typename... Args>
void warn(Args&&... args) {
    write(Level::warn, detail::join(std::forward<Args>(args)...));
}
template <typename... Args>
void info(Args&&... args) {
    write(Level::info, detail::join(std::forward<Args>(args)...));
}
template <typename... Args>
void debug(Args&&... args) {
    write(Level::debug, detail::join(std::forward<Args>(args)...));
}

}  // namespace edgeledger::log
