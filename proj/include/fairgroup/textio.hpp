#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fairgroup {

// Shortest representation that parses back to the same double. Used for
// every number we write to disk so that re-runs are byte-identical and
// save/load round-trips are exact.
std::string fmt_double(double value);

std::optional<double> parse_double(std::string_view text);
std::optional<std::int64_t> parse_int(std::string_view text);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace fairgroup
