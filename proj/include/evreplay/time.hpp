// Copyright 2026 The evreplay Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace evr {

// Civil (wall-clock) time with no zone and no DST. Arithmetic is plain
// seconds since 1970-01-01T00:00:00 of the civil clock.
using Timestamp = std::chrono::sys_seconds;
using Seconds = std::chrono::seconds;

/// Parses `YYYY-MM-DDTHH:MM:SS`. Anything else (zone suffixes, fractional
/// seconds, out-of-range fields) yields nullopt.
std::optional<Timestamp> parse_timestamp(std::string_view text);

std::string format_timestamp(Timestamp ts);
void append_timestamp(std::string& out, Timestamp ts);

inline std::chrono::sys_days date_of(Timestamp ts) {
    return std::chrono::floor<std::chrono::days>(ts);
}

inline std::chrono::weekday weekday_of(Timestamp ts) {
    return std::chrono::weekday{date_of(ts)};
}

/// Seconds elapsed since local midnight.
inline Seconds time_of_day(Timestamp ts) {
    return ts - std::chrono::time_point_cast<Seconds>(date_of(ts));
}

inline double to_hours(Seconds s) {
    return static_cast<double>(s.count()) / 3600.0;
}

}  // namespace evr
