#pragma once

#include <stdexcept>
#include <string>

namespace divgen {

// Invalid parameter combinations (degenerate SearchConfig, infeasible model params).
struct ConfigError : std::invalid_argument {
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed input files; the message names the offending field.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace divgen
