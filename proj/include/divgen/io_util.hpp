#pragma once

#include <string>

namespace divgen {

// Shortest round-trip decimal rendering (std::to_chars).
std::string format_double(double v);

// Writes to "<path>.tmp" then renames, so interrupted writes leave no partial
// artifact. Throws IoError.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace divgen
