#pragma once

#include <charconv>
#include <string>

namespace sc {

// Locale-independent shortest-general formatting ('.' decimal separator no
// matter what the process locale says).
inline std::string format_general(double v, int significant_digits) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general,
                                   significant_digits);
    return std::string(buf, res.ptr);
}

}  // namespace sc
