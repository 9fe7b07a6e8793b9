#pragma once

#include <charconv>
#include <string>

namespace sirf {

/// Shortest decimal string that parses back to exactly the same double.
/// Used everywhere a number ends up in a file so output is byte-stable
/// across runs and platforms.
inline std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    (void)ec; // 64 bytes is always enough for a double
    return std::string(buf, ptr);
}

} // namespace sirf
