#pragma once

#include <charconv>
#include <string>
#include <vector>

#include "edgeledger/errors.hpp"
#include "edgeledger/jsonio.hpp"

namespace edgeledger::contracts::detail {

inline void expect_args(const std::vector<std::string>& args, std::size_t n, const char* what) {
    if (args.size() != n)
        throw ContractError(ErrorCode::validation, std::string(what) + ": expected " +
                                                       std::to_string(n) + " args, got " +
                                                       std::to_string(args.size()));
}

inline std::int64_t parse_int_arg(const std::string& s, const char* what) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ContractError(ErrorCode::validation,
                            std::string(what) + ": not an integer: '" + s + "'");
    return value;
}

inline std::int64_t parse_window_minutes(const std::string& s, const char* what) {
    std::int64_t w = parse_int_arg(s, what);
    if (w <= 0)
        throw ContractError(ErrorCode::validation,
                            std::string(what) + ": windowMinutes must be positive");
    return w;
}

inline std::int64_t window_start(std::int64_t now_ms, std::int64_t window_minutes) {
    return now_ms - window_minutes * 60000;
}

}  // namespace edgeledger::contracts::detail
