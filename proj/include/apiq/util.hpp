// Copyright the apiq authors.
//
// Licensed under the terms of the Apache 2.0 open source license.
// Please refer to the LICENSE file in the project root for the terms.

#pragma once

#include <charconv>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace apiq {

/// Wall-clock time in UTC milliseconds since the epoch. Used only for
/// timestamp fields; durations must come from the monotonic clock.
inline int64_t wall_now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

/// Monotonic milliseconds, for measuring durations and deadlines.
inline int64_t steady_now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

/// FNV-1a 64-bit. Stable across platforms, unlike std::hash.
inline uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string utc_day(int64_t ms);      // "YYYY-MM-DD"
std::string utc_iso8601(int64_t ms);  // "YYYY-MM-DDTHH:MM:SS.mmmZ"

/// Splits on a single-character delimiter; preserves empty fields.
std::vector<std::string> split(std::string_view s, char delim);

std::string trim(std::string_view s);

std::optional<int64_t> parse_i64(std::string_view s);
std::optional<double> parse_double(std::string_view s);

/// Fixed-point formatting ("%.Nf"); the log and report formats depend on it
/// being locale-independent.
std::string format_fixed(double v, int decimals);

/// Replaces field/record separators so free text cannot break a log line.
std::string sanitize_field(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace apiq
