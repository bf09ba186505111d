#pragma once

#include <string>

namespace dlr {

/// Shortest round-trip decimal representation ('.' separator, locale
/// independent). Non-finite values print as nan, inf, -inf.
std::string format_double(double value);

}  // namespace dlr
