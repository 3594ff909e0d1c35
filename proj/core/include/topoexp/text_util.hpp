#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace topoexp::text {

// Shortest decimal representation that parses back to the identical double.
std::string format_double(double value);

// Fixed-precision formatting for human-facing CSV columns.
std::string format_fixed(double value, int decimals);

// Parses the whole token as a double; returns false on trailing garbage.
bool parse_double(std::string_view token, double& out);
bool parse_int(std::string_view token, long long& out);

std::vector<std::string_view> split(std::string_view s, char sep);
std::vector<std::string_view> split_whitespace(std::string_view s);
std::string_view trim(std::string_view s);

// Splits text into lines, dropping a trailing '\r' on each.
std::vector<std::string_view> lines(std::string_view text);

}  // namespace topoexp::text
