#pragma once

#include <charconv>
#include <string>

namespace advecta {

/// Shortest round-trip decimal form of a double. Used for every float that
/// lands in a CSV cell or substituted expression so repeated runs emit
/// byte-identical output.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace advecta
