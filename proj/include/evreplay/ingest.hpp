// Copyright 2026 The evreplay Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evreplay/time.hpp"

namespace evr {

inline constexpr std::string_view kTripLogHeader =
    "user_id,start_ts,end_ts,km_urban,km_extraurban,km_highway";

/// One ignition-on to ignition-off drive.
struct TripRecord {
    std::string user_id;
    Timestamp start_ts{};
    Timestamp end_ts{};
    double km_urban = 0.0;
    double km_extraurban = 0.0;
    double km_highway = 0.0;

    double total_km() const { return km_urban + km_extraurban + km_highway; }
    Seconds duration() const { return end_ts - start_ts; }

    bool operator==(const TripRecord&) const = default;
};

/// Gap between two consecutive trips of one user.
struct ParkingEvent {
    std::string user_id;
    Timestamp start_ts{};
    Timestamp end_ts{};

    Seconds duration() const { return end_ts - start_ts; }

    bool operator==(const ParkingEvent&) const = default;
};

/// A problem with one input row. `line` is 1-based and counts the header;
/// it is 0 for diagnostics raised after parsing (e.g. overlaps).
struct Diagnostic {
    std::size_t line = 0;
    std::string user_id;
    std::string message;
};

struct ParseResult {
    std::vector<TripRecord> trips;
    std::vector<Diagnostic> diagnostics;
    std::size_t rows = 0;  ///< data rows seen, well-formed or not
};

/// Reads the trip-log CSV. Throws Error(Io) when the stream is unreadable or
/// the header does not match kTripLogHeader. Bad rows are reported, not thrown.
ParseResult parse_trip_log(std::istream& in);
ParseResult parse_trip_log(std::string_view text);

/// Writes trips in the trip-log CSV format (header included). Distances use the
/// shortest decimal form that round-trips, so write/parse is lossless.
void write_trip_log(std::ostream& out, std::span<const TripRecord> trips);
void append_trip_row(std::string& out, const TripRecord& trip);

enum class FilterRule { TooShort, TooLong, TooNear, TooFar, TooSlow, TooFast };

std::string_view to_string(FilterRule rule);

struct CleaningReport {
    std::size_t rows_read = 0;
    std::size_t malformed = 0;
    std::size_t input_trips = 0;  ///< well-formed rows = rows_read - malformed
    std::size_t overlapping = 0;
    std::size_t short_parking_merges = 0;
    std::size_t too_short = 0;
    std::size_t too_long = 0;
    std::size_t too_near = 0;
    std::size_t too_far = 0;
    std::size_t too_slow = 0;
    std::size_t too_fast = 0;
    std::size_t retained = 0;

    std::size_t rejections() const {
        return too_short + too_long + too_near + too_far + too_slow + too_fast;
    }

    /// input_trips - overlapping - merges - rejections == retained
    bool reconciles() const {
        return rows_read == malformed + input_trips &&
               input_trips == overlapping + short_parking_merges + rejections() + retained;
    }

    void tally(FilterRule rule);
    CleaningReport& operator+=(const CleaningReport& other);
    bool operator==(const CleaningReport&) const = default;
};

std::string to_json(const CleaningReport& report);

inline constexpr Seconds kShortParkingThreshold{120};
inline constexpr Seconds kMinTripDuration{60};
inline constexpr Seconds kMaxTripDuration{12 * 3600};
inline constexpr double kMinTripKm = 0.005;
inline constexpr double kMaxTripKm = 800.0;
inline constexpr double kMinAvgSpeedKmh = 5.0;
inline constexpr double kMaxAvgSpeedKmh = 130.0;

/// Sorts one user's trips by start time and drops any trip starting before
/// its predecessor ends, with one diagnostic per dropped trip.
std::vector<TripRecord> sort_and_validate_user(std::vector<TripRecord> trips,
                                               std::vector<Diagnostic>& diagnostics);

/// Collapses trips separated by a parking shorter than `threshold` (strict).
/// Chains collapse left to right into one trip with summed distances.
std::vector<TripRecord> merge_short_parkings(std::span<const TripRecord> sorted,
                                             Seconds threshold = kShortParkingThreshold,
                                             std::size_t* merges = nullptr);

/// First rule the trip violates, checked in the order of FilterRule. Bounds
/// are inclusive: exactly 1 min, 12 h, 5 km/h or 130 km/h is kept.
std::optional<FilterRule> violated_rule(const TripRecord& trip);

struct FilterResult {
    std::vector<TripRecord> retained;
    CleaningReport report;
};

FilterResult filter_trips(std::vector<TripRecord> trips);

/// Exactly n-1 parkings for n trips; parking i spans trip i end to trip i+1 start.
std::vector<ParkingEvent> derive_parkings(std::span<const TripRecord> trips);

/// Cleaned, alternating trip/parking sequence of one user.
struct UserTimeline {
    std::string user_id;
    std::vector<TripRecord> trips;
    std::vector<ParkingEvent> parkings;
};

/// Splits trips by user, ordered by first appearance in the input.
std::vector<std::vector<TripRecord>> group_by_user(std::vector<TripRecord> trips);

struct CleanUserResult {
    UserTimeline timeline;
    CleaningReport report;
    std::vector<Diagnostic> diagnostics;
};

/// sort/validate -> merge short parkings -> filter -> derive parkings.
CleanUserResult clean_user(std::vector<TripRecord> trips);

struct CleanedLog {
    std::vector<UserTimeline> users;  ///< users left with zero trips are omitted
    CleaningReport report;
    std::vector<Diagnostic> diagnostics;
};

/// Full cleaning pipeline over a parsed log. Users are independent and are
/// processed on up to `jobs` threads; output order does not depend on `jobs`.
CleanedLog clean_trip_log(ParseResult parsed, unsigned jobs = 1);

/// Serializes cleaned users back to the trip-log format, user blocks in order.
void write_cleaned_log(std::ostream& out, std::span<const UserTimeline> users);

}  // namespace evr
