#include "smilansky/format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>

#include "smilansky/error.hpp"

namespace smilansky {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto [end, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
  return std::string(buf.data(), end);
}

std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

double parse_double(std::string_view text, std::string_view context) {
  const auto t = trim(text);
  if (t == "inf") return std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError("cannot parse '" + std::string(t) + "' as a real number" +
                      (context.empty() ? "" : " for key " + std::string(context)));
  }
  return value;
}

long long parse_integer(std::string_view text, std::string_view context) {
  const auto t = trim(text);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError("cannot parse '" + std::string(t) + "' as an integer" +
                      (context.empty() ? "" : " for key " + std::string(context)));
  }
  return value;
}

std::vector<double> parse_double_list(std::string_view text, std::string_view context) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto next = text.find_first_of(", \t", pos);
    const auto token = trim(text.substr(pos, next == std::string_view::npos ? next : next - pos));
    if (!token.empty()) out.push_back(parse_double(token, context));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

}  // namespace smilansky
