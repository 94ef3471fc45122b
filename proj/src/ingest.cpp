// Copyright 2026 The evreplay Authors
// SPDX-License-Identifier: Apache-2.0

#include "evreplay/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "evreplay/error.hpp"
#include "evreplay/parallel.hpp"

namespace evr {

namespace {

constexpr std::size_t kFieldCount = 6;

std::string_view trim_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
    }
    return line;
}

// Returns an error message, or empty on success.
std::string parse_distance(std::string_view field, std::string_view name, double& out) {
    if (field.empty()) {
        return "missing field " + std::string(name);
    }
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(out)) {
        return "bad distance in " + std::string(name);
    }
    if (out < 0.0) {
        return "negative distance in " + std::string(name);
    }
    return {};
}

std::string parse_row(std::string_view line, TripRecord& trip) {
    std::string_view fields[kFieldCount];
    std::size_t n = 0;
    std::size_t pos = 0;
    for (;;) {
        const std::size_t comma = line.find(',', pos);
        const auto field = line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos);
        if (n == kFieldCount) {
            return "too many fields";
        }
        fields[n++] = field;
        if (comma == std::string_view::npos) {
            break;
        }
        pos = comma + 1;
    }
    if (n != kFieldCount) {
        return "missing field (expected 6, got " + std::to_string(n) + ")";
    }
    if (fields[0].empty()) {
        return "missing field user_id";
    }
    trip.user_id.assign(fields[0]);

    if (fields[1].empty()) {
        return "missing field start_ts";
    }
    if (fields[2].empty()) {
        return "missing field end_ts";
    }
    const auto start = parse_timestamp(fields[1]);
    if (!start) {
        return "bad timestamp in start_ts";
    }
    const auto end = parse_timestamp(fields[2]);
    if (!end) {
        return "bad timestamp in end_ts";
    }
    if (*end <= *start) {
        return "end_ts not after start_ts";
    }
    trip.start_ts = *start;
    trip.end_ts = *end;

    if (auto err = parse_distance(fields[3], "km_urban", trip.km_urban); !err.empty()) {
        return err;
    }
    if (auto err = parse_distance(fields[4], "km_extraurban", trip.km_extraurban); !err.empty()) {
        return err;
    }
    if (auto err = parse_distance(fields[5], "km_highway", trip.km_highway); !err.empty()) {
        return err;
    }
    return {};
}

void append_double(std::string& out, double value) {
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    out.append(buf, end);
}

}  // namespace

ParseResult parse_trip_log(std::istream& in) {
    if (!in) {
        throw Error(ErrorKind::Io, "trip log stream is not readable");
    }
    ParseResult result;
    std::string line;
    if (!std::getline(in, line)) {
        if (in.bad()) {
            throw Error(ErrorKind::Io, "failed reading trip log");
        }
        throw Error(ErrorKind::Io, "trip log is empty (missing header)");
    }
    std::string_view header = trim_cr(line);
    if (header.starts_with("\xEF\xBB\xBF")) {
        header.remove_prefix(3);
    }
    if (header != kTripLogHeader) {
        throw Error(ErrorKind::Io, "unexpected trip log header: '" + std::string(header) + "'");
    }
    std::size_t line_no = 1;
    TripRecord trip;
    while (std::getline(in, line)) {
        ++line_no;
        const auto row = trim_cr(line);
        if (row.empty()) {
            continue;
        }
        ++result.rows;
        if (auto err = parse_row(row, trip); !err.empty()) {
            const auto comma = row.find(',');
            result.diagnostics.push_back(
                {line_no, std::string(row.substr(0, comma)), std::move(err)});
            continue;
        }
        result.trips.push_back(trip);
    }
    if (in.bad()) {
        throw Error(ErrorKind::Io, "failed reading trip log at line " + std::to_string(line_no));
    }
    return result;
}

ParseResult parse_trip_log(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_trip_log(in);
}

void append_trip_row(std::string& out, const TripRecord& trip) {
    out.append(trip.user_id);
    out.push_back(',');
    append_timestamp(out, trip.start_ts);
    out.push_back(',');
    append_timestamp(out, trip.end_ts);
    out.push_back(',');
    append_double(out, trip.km_urban);
    out.push_back(',');
    append_double(out, trip.km_extraurban);
    out.push_back(',');
    append_double(out, trip.km_highway);
    out.push_back('\n');
}

void write_trip_log(std::ostream& out, std::span<const TripRecord> trips) {
    std::string buf;
    buf.append(kTripLogHeader);
    buf.push_back('\n');
    for (const auto& trip : trips) {
        append_trip_row(buf, trip);
        if (buf.size() > (1u << 20)) {
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

std::string_view to_string(FilterRule rule) {
    switch (rule) {
        case FilterRule::TooShort: return "too_short";
        case FilterRule::TooLong: return "too_long";
        case FilterRule::TooNear: return "too_near";
        case FilterRule::TooFar: return "too_far";
        case FilterRule::TooSlow: return "too_slow";
        case FilterRule::TooFast: return "too_fast";
    }
    return "unknown";
}

void CleaningReport::tally(FilterRule rule) {
    switch (rule) {
        case FilterRule::TooShort: ++too_short; break;
        case FilterRule::TooLong: ++too_long; break;
        case FilterRule::TooNear: ++too_near; break;
        case FilterRule::TooFar: ++too_far; break;
        case FilterRule::TooSlow: ++too_slow; break;
        case FilterRule::TooFast: ++too_fast; break;
    }
}

CleaningReport& CleaningReport::operator+=(const CleaningReport& o) {
    rows_read += o.rows_read;
    malformed += o.malformed;
    input_trips += o.input_trips;
    overlapping += o.overlapping;
    short_parking_merges += o.short_parking_merges;
    too_short += o.too_short;
    too_long += o.too_long;
    too_near += o.too_near;
    too_far += o.too_far;
    too_slow += o.too_slow;
    too_fast += o.too_fast;
    retained += o.retained;
    return *this;
}

std::string to_json(const CleaningReport& r) {
    nlohmann::ordered_json j;
    j["rows_read"] = r.rows_read;
    j["malformed"] = r.malformed;
    j["input_trips"] = r.input_trips;
    j["overlapping"] = r.overlapping;
    j["short_parking_merges"] = r.short_parking_merges;
    j["too_short"] = r.too_short;
    j["too_long"] = r.too_long;
    j["too_near"] = r.too_near;
    j["too_far"] = r.too_far;
    j["too_slow"] = r.too_slow;
    j["too_fast"] = r.too_fast;
    j["retained"] = r.retained;
    return j.dump(2) + "\n";
}

std::vector<TripRecord> sort_and_validate_user(std::vector<TripRecord> trips,
                                               std::vector<Diagnostic>& diagnostics) {
    std::stable_sort(trips.begin(), trips.end(), [](const TripRecord& a, const TripRecord& b) {
        return a.start_ts < b.start_ts;
    });
    std::vector<TripRecord> kept;
    kept.reserve(trips.size());
    for (auto& trip : trips) {
        if (!kept.empty() && trip.start_ts < kept.back().end_ts) {
            diagnostics.push_back({0, trip.user_id,
                                   "overlapping trip starting " + format_timestamp(trip.start_ts) +
                                       " dropped (previous trip ends " +
                                       format_timestamp(kept.back().end_ts) + ")"});
            continue;
        }
        kept.push_back(std::move(trip));
    }
    return kept;
}

std::vector<TripRecord> merge_short_parkings(std::span<const TripRecord> sorted, Seconds threshold,
                                             std::size_t* merges) {
    std::vector<TripRecord> out;
    out.reserve(sorted.size());
    std::size_t merged = 0;
    for (const auto& trip : sorted) {
        if (!out.empty() && trip.start_ts - out.back().end_ts < threshold) {
            auto& head = out.back();
            head.end_ts = trip.end_ts;
            head.km_urban += trip.km_urban;
            head.km_extraurban += trip.km_extraurban;
            head.km_highway += trip.km_highway;
            ++merged;
            continue;
        }
        out.push_back(trip);
    }
    if (merges != nullptr) {
        *merges += merged;
    }
    return out;
}

std::optional<FilterRule> violated_rule(const TripRecord& trip) {
    const auto seconds = static_cast<double>(trip.duration().count());
    const double km = trip.total_km();
    if (trip.duration() < kMinTripDuration) {
        return FilterRule::TooShort;
    }
    if (trip.duration() > kMaxTripDuration) {
        return FilterRule::TooLong;
    }
    if (km < kMinTripKm) {
        return FilterRule::TooNear;
    }
    if (km > kMaxTripKm) {
        return FilterRule::TooFar;
    }
    // speed = km / (s / 3600), compared without the division
    if (km * 3600.0 < kMinAvgSpeedKmh * seconds) {
        return FilterRule::TooSlow;
    }
    if (km * 3600.0 > kMaxAvgSpeedKmh * seconds) {
        return FilterRule::TooFast;
    }
    return std::nullopt;
}

FilterResult filter_trips(std::vector<TripRecord> trips) {
    FilterResult result;
    result.retained.reserve(trips.size());
    for (auto& trip : trips) {
        if (const auto rule = violated_rule(trip)) {
            result.report.tally(*rule);
            continue;
        }
        result.retained.push_back(std::move(trip));
    }
    result.report.retained = result.retained.size();
    return result;
}

std::vector<ParkingEvent> derive_parkings(std::span<const TripRecord> trips) {
    std::vector<ParkingEvent> parkings;
    if (trips.size() < 2) {
        return parkings;
    }
    parkings.reserve(trips.size() - 1);
    for (std::size_t i = 0; i + 1 < trips.size(); ++i) {
        parkings.push_back({trips[i].user_id, trips[i].end_ts, trips[i + 1].start_ts});
    }
    return parkings;
}

std::vector<std::vector<TripRecord>> group_by_user(std::vector<TripRecord> trips) {
    std::vector<std::vector<TripRecord>> groups;
    std::unordered_map<std::string, std::size_t> index;
    for (auto& trip : trips) {
        auto [it, inserted] = index.try_emplace(trip.user_id, groups.size());
        if (inserted) {
            groups.emplace_back();
        }
        groups[it->second].push_back(std::move(trip));
    }
    return groups;
}

CleanUserResult clean_user(std::vector<TripRecord> trips) {
    CleanUserResult result;
    if (trips.empty()) {
        return result;
    }
    result.timeline.user_id = trips.front().user_id;
    const std::size_t input = trips.size();
    auto sorted = sort_and_validate_user(std::move(trips), result.diagnostics);
    std::size_t merges = 0;
    auto merged = merge_short_parkings(sorted, kShortParkingThreshold, &merges);
    auto filtered = filter_trips(std::move(merged));

    result.report = filtered.report;
    result.report.rows_read = input;
    result.report.input_trips = input;
    result.report.overlapping = input - sorted.size();
    result.report.short_parking_merges = merges;
    result.timeline.parkings = derive_parkings(filtered.retained);
    result.timeline.trips = std::move(filtered.retained);
    return result;
}

CleanedLog clean_trip_log(ParseResult parsed, unsigned jobs) {
    CleanedLog log;
    log.report.rows_read = parsed.diagnostics.size();
    log.report.malformed = parsed.diagnostics.size();
    log.diagnostics = std::move(parsed.diagnostics);

    auto groups = group_by_user(std::move(parsed.trips));
    std::vector<CleanUserResult> cleaned(groups.size());
    parallel_for(groups.size(), jobs,
                 [&](std::size_t i) { cleaned[i] = clean_user(std::move(groups[i])); });

    for (auto& user : cleaned) {
        log.report += user.report;
        std::move(user.diagnostics.begin(), user.diagnostics.end(),
                  std::back_inserter(log.diagnostics));
        if (!user.timeline.trips.empty()) {
            log.users.push_back(std::move(user.timeline));
        }
    }
    return log;
}

void write_cleaned_log(std::ostream& out, std::span<const UserTimeline> users) {
    std::string buf;
    buf.append(kTripLogHeader);
    buf.push_back('\n');
    for (const auto& user : users) {
        for (const auto& trip : user.trips) {
            append_trip_row(buf, trip);
        }
        if (buf.size() > (1u << 20)) {
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

}  // namespace evr
