#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace sgcauc {

/// 12 significant digits; every numeric output goes through here.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace sgcauc
