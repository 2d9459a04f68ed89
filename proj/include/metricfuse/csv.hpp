#pragma once

// Minimal comma-separated parsing/formatting helpers for the metricfuse file
// formats. Fields are plain tokens (no quoting); `#` starts a comment line.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "metricfuse/error.hpp"

namespace metricfuse::csv {

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

inline std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

inline std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return fields;
}

// Parses a finite double in decimal or scientific notation. The whole token
// must be consumed. Throws NonNumericValue naming the 1-based source line.
inline double parse_double(const std::string& token, std::size_t line_no) {
    std::string_view body = token;
    if (!body.empty() && body.front() == '+') body.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (ec != std::errc() || ptr != body.data() + body.size() || !std::isfinite(value)) {
        raise(Errc::NonNumericValue,
              "line " + std::to_string(line_no) + ": not a finite number: '" + token + "'");
    }
    return value;
}

// Shortest representation that round-trips exactly; integral values keep a
// trailing ".0" so score columns always look like reals (e.g. "82.0").
inline std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    std::string out(buf, ptr);
    if (out.find_first_of(".eEn") == std::string::npos) out += ".0";
    return out;
}

struct Line {
    std::size_t number = 0;  // 1-based physical line number
    std::string text;        // trimmed, non-comment, non-empty
};

// Reads all meaningful lines (skips blanks and `#` comments).
inline std::vector<Line> read_lines(std::istream& in) {
    std::vector<Line> lines;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string text = trim(raw);
        if (text.empty() || text.front() == '#') continue;
        lines.push_back({line_no, text});
    }
    return lines;
}

// Validates a header against the expected lowercase column names.
inline void expect_header(const Line& header, const std::vector<std::string>& expected,
                          const std::string& what) {
    const auto fields = split_fields(header.text);
    if (fields.size() != expected.size()) {
        raise(Errc::MissingColumn, what + ": expected " + std::to_string(expected.size()) +
                                       " columns, found " + std::to_string(fields.size()) +
                                       " on line " + std::to_string(header.number));
    }
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (to_lower(fields[i]) != expected[i]) {
            raise(Errc::MissingColumn, what + ": expected column '" + expected[i] +
                                           "' at position " + std::to_string(i + 1) +
                                           ", found '" + fields[i] + "'");
        }
    }
}

}  // namespace metricfuse::csv
