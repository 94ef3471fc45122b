// Copyright 2026 The evreplay Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "evreplay/ingest.hpp"

namespace evr {

/// Dirty rows to inject, one count per cleaning outcome. Each injected trip
/// violates exactly the rule it is counted under (first-match order).
struct InjectionCounts {
    std::size_t too_short = 0;
    std::size_t too_long = 0;
    std::size_t too_near = 0;
    std::size_t too_far = 0;
    std::size_t too_slow = 0;
    std::size_t too_fast = 0;
    std::size_t short_parking_merges = 0;  ///< pairs separated by a 60 s parking
    std::size_t overlapping = 0;           ///< pairs where the second starts inside the first
    std::size_t malformed = 0;             ///< bad timestamp / negative distance / missing field

    std::size_t total() const {
        return too_short + too_long + too_near + too_far + too_slow + too_fast +
               short_parking_merges + overlapping + malformed;
    }
    bool operator==(const InjectionCounts&) const = default;
};

/// Parameters of the synthetic trip-log generator. Distances are lognormal
/// per user and per day; trips are scheduled inside [departure, day_end]
/// with at least `min_gap_minutes` between them. Trip durations follow from
/// fixed road speeds (urban 28, extra-urban 60, highway 105 km/h).
struct GeneratorProfile {
    std::string name = "mixed-fleet";
    std::uint64_t seed = 20231001;
    std::size_t n_users = 1000;
    int horizon_days = 365;
    std::chrono::sys_days start_date{std::chrono::year{2023} / 10 / 1};
    std::string user_prefix = "u";

    // activity
    double active_prob_min = 0.55;
    double active_prob_max = 0.95;
    double weekend_activity = 0.8;  ///< multiplier on the active probability on Sat/Sun
    double trips_per_day_median = 4.3;
    double trips_per_day_sigma = 0.4;  ///< between users
    int max_trips_per_day = 12;

    // distance
    double daily_km_median = 36.0;
    double daily_km_user_sigma = 0.5;
    double daily_km_day_sigma = 0.45;
    double daily_km_cap = 0.0;  ///< 0 = uncapped
    double min_trip_km = 1.0;
    double long_trip_prob = 0.01;  ///< per active day
    double long_trip_km_min = 120.0;
    double long_trip_km_max = 420.0;
    double forced_long_trip_km = 0.0;  ///< > 0: first active day opens with this much highway
    double highway_share = 0.2;
    double extraurban_share = 0.35;

    // schedule (hours of day)
    double departure_hour = 7.5;
    double departure_sd_hours = 1.5;
    double earliest_departure_hour = 5.5;
    double day_end_hour = 22.5;
    double min_gap_minutes = 10.0;

    // weekday commute pattern
    double commuter_share = 0.0;
    double commute_km_median = 12.0;
    double work_hours = 8.5;

    InjectionCounts inject{};

    /// Throws Error(Usage) with an explanation for out-of-range fields or
    /// profiles whose days cannot hold their trips.
    void validate() const;
};

/// "commuter", "long-hauler", "mixed-fleet", "dirty-data".
std::vector<std::string> preset_names();
std::vector<GeneratorProfile> preset_profiles();

/// Throws Error(Usage) "unknown profile ..." for other names.
GeneratorProfile preset_profile(std::string_view name);

/// Applies fields from a JSON object onto `base`; `"preset"` selects the base
/// when present. Unknown keys are rejected with Error(Usage).
GeneratorProfile profile_from_json(std::string_view json_text);
GeneratorProfile profile_from_json(std::string_view json_text, GeneratorProfile base);
std::string profile_to_json(const GeneratorProfile& profile);

struct GeneratedUser {
    std::string user_id;
    std::vector<TripRecord> trips;           ///< clean trips, then injected ones, chronological
    std::vector<std::string> malformed_rows;  ///< raw CSV lines without newline
};

/// Deterministic in (profile, index); independent of other users.
GeneratedUser generate_user(const GeneratorProfile& profile, std::size_t index);

/// Writes the full trip log (header included), users in index order.
void generate(const GeneratorProfile& profile, std::ostream& out);
std::string generate(const GeneratorProfile& profile);

}  // namespace evr
