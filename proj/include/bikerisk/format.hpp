#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace bikerisk {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// printf "%.6f".
std::string format_fixed6(double value);

/// Strict full-string parse; throws ValidationError naming `what` on failure.
double parse_double(std::string_view text, std::string_view what);
long long parse_integer(std::string_view text, std::string_view what);

/// Comma separated list of doubles, e.g. "0,0.5,0.75".
std::vector<double> parse_double_list(std::string_view text, std::string_view what);

std::string trim(std::string_view text);
std::string to_lower(std::string_view text);

}  // namespace bikerisk
