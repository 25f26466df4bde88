#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace divgen {

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

// Verbosity comes from the DIVGEN_LOG env var: error|warn|info|debug (default warn).
inline LogLevel log_level() {
    static LogLevel level = [] {
        const char* v = std::getenv("DIVGEN_LOG");
        if (!v) return LogLevel::warn;
        if (std::strcmp(v, "error") == 0 || std::strcmp(v, "0") == 0) return LogLevel::error;
        if (std::strcmp(v, "warn") == 0 || std::strcmp(v, "1") == 0) return LogLevel::warn;
        if (std::strcmp(v, "info") == 0 || std::strcmp(v, "2") == 0) return LogLevel::info;
        if (std::strcmp(v, "debug") == 0 || std::strcmp(v, "3") == 0) return LogLevel::debug;
        return LogLevel::warn;
    }();
    return level;
}

template <typename... Args>
void log_at(LogLevel lvl, const char* tag, const char* fmt, Args... args) {
    if (lvl > log_level()) return;
    std::fprintf(stderr, "[divgen] %s: ", tag);
    if constexpr (sizeof...(Args) == 0)
        std::fputs(fmt, stderr);
    else
        std::fprintf(stderr, fmt, args...);
    std::fputc('\n', stderr);
}

template <typename... Args>
void log_error(const char* fmt, Args... args) { log_at(LogLevel::error, "error", fmt, args...); }
template <typename... Args>
void log_warn(const char* fmt, Args... args) { log_at(LogLevel::warn, "warn", fmt, args...); }
template <typename... Args>
void log_info(const char* fmt, Args... args) { log_at(LogLevel::info, "info", fmt, args...); }
template <typename... Args>
void log_debug(const char* fmt, Args... args) { log_at(LogLevel::debug, "debug", fmt, args...); }

}  // namespace divgen
