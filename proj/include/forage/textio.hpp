#pragma once

#include <string>
#include <string_view>

namespace forage {

// Shortest round-trip decimal form via std::to_chars: locale-free and
// identical on every run, which the byte-determinism contract needs.
std::string fmt_double(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

} // namespace forage
