#pragma once

#include <cstdio>
#include <functional>
#include <mutex>
#include <string>
#include <utility>

namespace momentkit {

using WarningHandler = std::function<void(const std::string&)>;

namespace detail {
inline std::mutex& warning_mutex() {
    static std::mutex m;
    return m;
}
inline WarningHandler& warning_slot() {
    static WarningHandler h = [](const std::string& msg) { std::fprintf(stderr, "momentkit: warning: %s\n", msg.c_str()); };
    return h;
}
}  // namespace detail

// Replaces the sink for library warnings; an empty handler silences them.
inline void set_warning_handler(WarningHandler handler) {
    std::lock_guard lock(detail::warning_mutex());
    detail::warning_slot() = std::move(handler);
}

inline void warn(const std::string& message) {
    std::lock_guard lock(detail::warning_mutex());
    if (detail::warning_slot()) detail::warning_slot()(message);
}

}  // namespace momentkit
