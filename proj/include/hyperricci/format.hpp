#pragma once

#include <charconv>
#include <string>
#include <string_view>

#include "hyperricci/error.hpp"

namespace hyperricci {

/// Shortest decimal text that reads back to exactly `value`.
inline std::string format_double(double value) {
  char buffer[32];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc{}) throw Error("cannot format number");
  return std::string(buffer, end);
}

inline bool parse_double(std::string_view text, double& value) {
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc{} && end == text.data() + text.size();
}

}  // namespace hyperricci
