#pragma once

#include <charconv>
#include <string>

namespace antnet {

// Shortest round-trip decimal form; locale-free and identical across runs.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace antnet
