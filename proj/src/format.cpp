#include "genbound/format.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace genbound {

std::string format_sig(double value, int digits) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

double round_sig(double value, int digits) {
  if (!std::isfinite(value)) return value;
  return std::strtod(format_sig(value, digits).c_str(), nullptr);
}

}  // namespace genbound
