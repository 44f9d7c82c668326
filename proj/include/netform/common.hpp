#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace netform {

// Thrown for unreadable/missing/malformed input files and unwritable outputs.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown for model-level failures: invalid parameters, nonexistent estimates,
// dimension mismatches, enumeration bounds.
struct model_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shortest round-trip decimal form; used by every CSV/JSON writer so that
// identical values serialize to identical bytes.
inline std::string fmt_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string fmt_int(long long v) {
    char buf[24];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, const char* what) {
    double v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw io_error(std::string("cannot parse number for ") + what + ": '" + std::string(s) + "'");
    return v;
}

inline long long parse_int(std::string_view s, const char* what) {
    long long v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw io_error(std::string("cannot parse integer for ") + what + ": '" + std::string(s) + "'");
    return v;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace netform
