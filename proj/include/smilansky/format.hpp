#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace smilansky {

// Locale-independent, 17 significant digits; round-trips through parse_double.
std::string format_double(double value);

// Strict parse of a full token (no trailing characters); throws ConfigError.
double parse_double(std::string_view text, std::string_view context = {});
long long parse_integer(std::string_view text, std::string_view context = {});

// Comma/whitespace separated list of reals.
std::vector<double> parse_double_list(std::string_view text, std::string_view context = {});

std::string_view trim(std::string_view text);

}  // namespace smilansky
