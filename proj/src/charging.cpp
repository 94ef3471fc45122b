// Copyright 2026 The evreplay Authors
// SPDX-License-Identifier: Apache-2.0

#include "evreplay/charging.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

#include "evreplay/error.hpp"

namespace evr {

namespace {

using namespace std::chrono_literals;

constexpr std::array<std::string_view, 7> kShortNames{"Sun", "Mon", "Tue", "Wed",
                                                      "Thu", "Fri", "Sat"};
constexpr std::array<std::string_view, 7> kLongNames{"sunday",   "monday", "tuesday", "wednesday",
                                                     "thursday", "friday", "saturday"};

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) ==
                      std::tolower(static_cast<unsigned char>(y));
           });
}

ChargeDecision windowed_decision(const ChargingPolicy& policy, const WeeklyWindow& window,
                                 const ParkingEvent& parking, double soc_fraction) {
    using std::chrono::days;
    if (window.length() < policy.min_duration) {
        return std::nullopt;
    }
    const auto start_offset = std::chrono::duration_cast<Seconds>(window.start);
    const auto first_day = date_of(parking.start_ts) - days{1};
    const auto last_day = date_of(parking.end_ts);
    for (auto day = first_day; day <= last_day; day += days{1}) {
        if (!window.days.contains(std::chrono::weekday{day})) {
            continue;
        }
        const Timestamp inst_start = std::chrono::time_point_cast<Seconds>(day) + start_offset;
        const Timestamp inst_end = inst_start + window.length();
        const Timestamp begin = std::max(parking.start_ts, inst_start);
        const Timestamp end = std::min(parking.end_ts, inst_end);
        if (end - begin >= policy.min_duration) {
            // SoC is constant while parked and not charging, so the value at
            // the overlap start equals the value at parking start.
            if (soc_fraction < policy.soc_trigger) {
                return ChargeInterval{begin, end};
            }
            return std::nullopt;
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<std::chrono::weekday> parse_weekday(std::string_view name) {
    for (unsigned i = 0; i < 7; ++i) {
        if (iequals(name, kShortNames[i]) || iequals(name, kLongNames[i])) {
            return std::chrono::weekday{i};
        }
    }
    return std::nullopt;
}

std::string_view weekday_name(std::chrono::weekday wd) {
    return kShortNames[wd.c_encoding()];
}

Seconds WeeklyWindow::length() const {
    auto len = end - start;
    if (crosses_midnight()) {
        len += std::chrono::hours{24};
    }
    return std::chrono::duration_cast<Seconds>(len);
}

void ChargingPolicy::validate() const {
    const std::string label = "policy '" + name + "': ";
    if (!(power_kw > 0.0)) {
        throw Error(ErrorKind::Usage, label + "power must be > 0");
    }
    if (!(soc_trigger > 0.0 && soc_trigger <= 1.0)) {
        throw Error(ErrorKind::Usage, label + "soc_trigger must be in (0, 1]");
    }
    if (min_duration <= Seconds{0}) {
        throw Error(ErrorKind::Usage, label + "min_duration must be > 0");
    }
    if (const auto* w = std::get_if<WeeklyWindow>(&window)) {
        if (w->start == w->end) {
            throw Error(ErrorKind::Usage, label + "window start and end must differ");
        }
        if (w->days.empty()) {
            throw Error(ErrorKind::Usage, label + "window has no days");
        }
        if (w->start < 0min || w->start >= 24h || w->end < 0min || w->end >= 24h) {
            throw Error(ErrorKind::Usage, label + "window times must be within 00:00-23:59");
        }
    }
}

ChargingPolicy scenario(int n) {
    switch (n) {
        case 1:
            return {"scenario1", 7.4, 0.75, 6h, WeeklyWindow{WeekdaySet::monday_to_friday(), 8h, 20h}};
        case 2:
            return {"scenario2", 7.4, 0.25, 6h, AnyTime{}};
        case 3:
            return {"scenario3", 7.4, 0.75, 6h, WeeklyWindow{WeekdaySet::all(), 20h, 8h}};
        case 4:
            return {"scenario4", 50.0, 0.25, 20min, AnyTime{}};
        default:
            throw Error(ErrorKind::Usage,
                        "unknown scenario " + std::to_string(n) + " (expected 1..4)");
    }
}

ChargeDecision charge_decision(const ChargingPolicy& policy, const ParkingEvent& parking,
                               double soc_fraction) {
    if (const auto* window = std::get_if<WeeklyWindow>(&policy.window)) {
        return windowed_decision(policy, *window, parking, soc_fraction);
    }
    if (parking.duration() >= policy.min_duration && parking.duration() > Seconds{0} &&
        soc_fraction < policy.soc_trigger) {
        return ChargeInterval{parking.start_ts, parking.end_ts};
    }
    return std::nullopt;
}

ChargeDelivery charge_delivered(const ChargingPolicy& policy, const ChargeInterval& interval,
                                double soc_kwh, double capacity_kwh) {
    ChargeDelivery d;
    const double room = std::max(0.0, capacity_kwh - soc_kwh);
    d.energy_kwh = std::min(policy.power_kw * to_hours(interval.length()), room);
    d.duration_s = d.energy_kwh / policy.power_kw * 3600.0;
    d.end_ts = interval.begin_ts + Seconds{std::llround(d.duration_s)};
    return d;
}

}  // namespace evr
