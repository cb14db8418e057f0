#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace covert_aoi {

// Serialization used by both text and CSV output: 12 significant digits,
// "inf"/"-inf" for infinities, NaN renders as an empty field.
inline std::string format_number(double v, int significant = 12) {
  if (std::isnan(v)) return {};
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", significant, v);
  return buf;
}

inline std::string format_bool(bool v) { return v ? "true" : "false"; }

} // namespace covert_aoi
