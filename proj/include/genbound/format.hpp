#pragma once

#include <string>

namespace genbound {

/// printf "%.*g"; infinities print as "inf" / "-inf".
std::string format_sig(double value, int digits = 9);

/// value rounded to `digits` significant digits (infinities unchanged).
double round_sig(double value, int digits = 9);

}  // namespace genbound
