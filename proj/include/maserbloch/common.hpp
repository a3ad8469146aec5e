#pragma once

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mbloch {

inline constexpr double two_pi = 6.283185307179586476925286766559;

/// Convert an ordinary frequency in Hz to an angular rate in rad/s.
inline constexpr double hz_to_rad(double f) { return two_pi * f; }
inline constexpr double rad_to_hz(double w) { return w / two_pi; }

/// Bad configuration or parameter domain (CLI exit code 2).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Integration / numerical failure (CLI exit code 3).
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Analysis failure: fit rejection, missing features, schema mismatch (CLI exit code 4).
struct analysis_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shortest round-trip decimal representation of a double.
inline std::string format_double(double v) {
    char buf[40];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

/// Strict double parse; the whole string must be consumed.
inline double parse_double(std::string_view s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw config_error("not a valid number: '" + std::string(s) + "'");
    return v;
}

}  // namespace mbloch
