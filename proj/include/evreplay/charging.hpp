// Copyright 2026 The evreplay Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bitset>
#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "evreplay/ingest.hpp"
#include "evreplay/time.hpp"

namespace evr {

/// Set of weekdays, indexed by std::chrono::weekday::c_encoding() (Sunday = 0).
class WeekdaySet {
public:
    constexpr WeekdaySet() = default;

    static WeekdaySet all() { return WeekdaySet{0x7F}; }
    static WeekdaySet monday_to_friday() { return WeekdaySet{0x3E}; }

    void insert(std::chrono::weekday wd) { bits_.set(wd.c_encoding()); }
    bool contains(std::chrono::weekday wd) const { return bits_.test(wd.c_encoding()); }
    bool empty() const { return bits_.none(); }
    std::size_t size() const { return bits_.count(); }

    bool operator==(const WeekdaySet&) const = default;

private:
    explicit WeekdaySet(unsigned long bits) : bits_(bits) {}
    std::bitset<7> bits_;
};

/// Parses "Mon" / "monday" style names (case-insensitive).
std::optional<std::chrono::weekday> parse_weekday(std::string_view name);
std::string_view weekday_name(std::chrono::weekday wd);

struct AnyTime {
    bool operator==(const AnyTime&) const = default;
};

/// Recurring daily window on selected weekdays. When end < start the window
/// runs past midnight, and the instance belongs to the day it starts on.
struct WeeklyWindow {
    WeekdaySet days;
    std::chrono::minutes start{0};
    std::chrono::minutes end{0};

    bool crosses_midnight() const { return end < start; }
    Seconds length() const;

    bool operator==(const WeeklyWindow&) const = default;
};

using ChargingWindow = std::variant<AnyTime, WeeklyWindow>;

struct ChargingPolicy {
    std::string name;
    double power_kw = 0.0;
    double soc_trigger = 0.0;  ///< charge only when SoC fraction < trigger
    Seconds min_duration{0};
    ChargingWindow window = AnyTime{};

    bool windowed() const { return std::holds_alternative<WeeklyWindow>(window); }

    /// Throws Error(Usage) on power <= 0, min_duration <= 0, trigger outside
    /// (0, 1], or a window with start == end / no days.
    void validate() const;

    bool operator==(const ChargingPolicy&) const = default;
};

/// The four reference policies:
///   1: workplace, Mon-Fri 08:00-20:00, 7.4 kW, >= 6 h, SoC < 75 %
///   2: anytime,   7.4 kW, >= 6 h, SoC < 25 %
///   3: overnight, every day 20:00-08:00, 7.4 kW, >= 6 h, SoC < 75 %
///   4: anytime,   50 kW DC, >= 20 min, SoC < 25 %
/// Throws Error(Usage) for n outside 1..4.
ChargingPolicy scenario(int n);

/// Interval during which the charger is connected.
struct ChargeInterval {
    Timestamp begin_ts{};
    Timestamp latest_end_ts{};

    Seconds length() const { return latest_end_ts - begin_ts; }
    bool operator==(const ChargeInterval&) const = default;
};

/// nullopt means no charge for this parking.
using ChargeDecision = std::optional<ChargeInterval>;

/// At most one session per parking. AnyTime policies use the whole parking;
/// windowed policies use the earliest overlap with a single window instance
/// lasting at least min_duration. The trigger is evaluated once, at the
/// moment charging would begin, with strict "<".
ChargeDecision charge_decision(const ChargingPolicy& policy, const ParkingEvent& parking,
                               double soc_fraction);

struct ChargeDelivery {
    double energy_kwh = 0.0;
    double duration_s = 0.0;  ///< energy / power, stops at full
    Timestamp end_ts{};       ///< begin + duration, rounded to the nearest second
};

/// Constant-power session: energy = min(power * hours, capacity - soc).
ChargeDelivery charge_delivered(const ChargingPolicy& policy, const ChargeInterval& interval,
                                double soc_kwh, double capacity_kwh);

}  // namespace evr
