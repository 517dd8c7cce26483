#pragma once

#include <cstdio>
#include <cstdint>
#include <string>

namespace fpflab {

/// Formats a double with 17 significant digits ('.' decimal separator, no
/// grouping), enough to round-trip the value exactly. This is the one
/// formatting routine used for all CSV output, so reruns are byte-identical.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

inline std::string format_int(std::int64_t v) { return std::to_string(v); }

}  // namespace fpflab
