#pragma once

#include <charconv>
#include <string>

namespace aoisim {

// Locale-independent %.12g-style rendering for CSV output.
inline std::string format_double(double value) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

}  // namespace aoisim
