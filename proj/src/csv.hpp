#pragma once

// Minimal line-oriented CSV helpers shared by the loaders and writers.
// Fields never contain quotes or embedded commas in any format we read.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "attnet/core.hpp"

namespace attnet::csv {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split(std::string_view line, char sep = ',') {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = line.find(sep, pos);
        if (next == std::string_view::npos) {
            out.push_back(trim(line.substr(pos)));
            break;
        }
        out.push_back(trim(line.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    /// Next non-blank line; false at end of input.
    bool next(std::string& line) {
        while (std::getline(in_, line)) {
            ++lineno_;
            if (!trim(line).empty()) return true;
        }
        return false;
    }
    std::size_t lineno() const { return lineno_; }

private:
    std::istream& in_;
    std::size_t lineno_ = 0;
};

[[noreturn]] inline void malformed(std::size_t lineno, const std::string& what) {
    throw Error(Errc::MalformedRow, "line " + std::to_string(lineno) + ": " + what);
}

inline void expect_header(LineReader& reader, std::string_view expected) {
    std::string line;
    if (!reader.next(line)) malformed(1, "missing header, expected '" + std::string(expected) + "'");
    if (trim(line) != expected) {
        malformed(reader.lineno(), "header '" + std::string(trim(line)) + "' != '" + std::string(expected) + "'");
    }
}

template <typename Int>
inline Int parse_int(std::string_view text, std::size_t lineno, std::string_view field) {
    Int value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        malformed(lineno, "bad " + std::string(field) + " '" + std::string(text) + "'");
    }
    return value;
}

inline double parse_real(std::string_view text, std::size_t lineno, std::string_view field) {
    double value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
        malformed(lineno, "bad " + std::string(field) + " '" + std::string(text) + "'");
    }
    return value;
}

inline CountryCode parse_code(std::string_view text, std::size_t lineno) {
    if (!CountryCode::valid(text)) malformed(lineno, "bad country code '" + std::string(text) + "'");
    return CountryCode(text);
}

inline Date parse_day(std::string_view text, std::size_t lineno) {
    try {
        return parse_date(text);
    } catch (const Error&) {
        malformed(lineno, "bad date '" + std::string(text) + "'");
    }
}

/// Shortest representation that round-trips through from_chars.
inline std::string fmt_real(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace attnet::csv
