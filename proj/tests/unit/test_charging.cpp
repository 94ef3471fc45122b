// Copyright 2026 The evreplay Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "evreplay/charging.hpp"
#include "evreplay/error.hpp"
#include "evreplay/random.hpp"
#include "fixtures.hpp"

using namespace evr;
using evr::test::ts;
using namespace std::chrono;
using namespace std::chrono_literals;

namespace {

ParkingEvent parking(std::string_view start, std::string_view end) {
    return {"u", ts(start), ts(end)};
}

}  // namespace

TEST_CASE("reference scenarios") {
    const double powers[] = {7.4, 7.4, 7.4, 50.0};
    const double triggers[] = {0.75, 0.25, 0.75, 0.25};
    const Seconds durations[] = {6h, 6h, 6h, 20min};
    for (int n = 1; n <= 4; ++n) {
        CAPTURE(n);
        const auto p = scenario(n);
        CHECK(p.power_kw == powers[n - 1]);
        CHECK(p.soc_trigger == triggers[n - 1]);
        CHECK(p.min_duration == durations[n - 1]);
        CHECK_NOTHROW(p.validate());
    }
    const auto s1 = std::get<WeeklyWindow>(scenario(1).window);
    CHECK(s1.days == WeekdaySet::monday_to_friday());
    CHECK(s1.start == 8h);
    CHECK(s1.end == 20h);
    CHECK_FALSE(s1.crosses_midnight());
    CHECK(std::holds_alternative<AnyTime>(scenario(2).window));
    const auto s3 = std::get<WeeklyWindow>(scenario(3).window);
    CHECK(s3.days == WeekdaySet::all());
    CHECK(s3.start == 20h);
    CHECK(s3.end == 8h);
    CHECK(s3.crosses_midnight());
    CHECK(s3.length() == 12h);
    const auto s4 = scenario(4);
    CHECK(std::holds_alternative<AnyTime>(s4.window));
    CHECK(s4.min_duration == Seconds{1200});
    CHECK_THROWS_AS(scenario(0), Error);
    CHECK_THROWS_AS(scenario(5), Error);
}

TEST_CASE("weekday sets") {
    const auto wd = WeekdaySet::monday_to_friday();
    CHECK(wd.size() == 5);
    CHECK(wd.contains(Monday));
    CHECK(wd.contains(Friday));
    CHECK_FALSE(wd.contains(Saturday));
    CHECK_FALSE(wd.contains(Sunday));
    CHECK(parse_weekday("mon") == Monday);
    CHECK(parse_weekday("Sunday") == Sunday);
    CHECK_FALSE(parse_weekday("Mo").has_value());
    CHECK(weekday_name(Wednesday) == "Wed");
}

TEST_CASE("decision examples") {
    // 2024-03-01 is a Friday.
    const auto s3 = scenario(3);
    CHECK(charge_decision(s3, parking("2024-03-01T19:00:00", "2024-03-02T09:00:00"), 0.60) ==
          ChargeInterval{ts("2024-03-01T20:00:00"), ts("2024-03-02T08:00:00")});
    CHECK_FALSE(charge_decision(s3, parking("2024-03-01T21:00:00", "2024-03-02T02:00:00"), 0.10));
    CHECK_FALSE(charge_decision(scenario(2), parking("2024-03-01T09:00:00", "2024-03-01T17:00:00"), 0.30));
    CHECK(charge_decision(scenario(4), parking("2024-03-01T09:00:00", "2024-03-01T09:25:00"), 0.10) ==
          ChargeInterval{ts("2024-03-01T09:00:00"), ts("2024-03-01T09:25:00")});
}

TEST_CASE("trigger is strict and duration bound inclusive") {
    const auto s2 = scenario(2);
    const auto p = parking("2024-03-01T09:00:00", "2024-03-01T15:00:00");
    CHECK_FALSE(charge_decision(s2, p, 0.25));
    CHECK(charge_decision(s2, p, 0.2499));
    CHECK_FALSE(charge_decision(s2, parking("2024-03-01T09:00:00", "2024-03-01T14:59:59"), 0.1));
    const auto s4 = scenario(4);
    CHECK(charge_decision(s4, parking("2024-03-01T09:00:00", "2024-03-01T09:20:00"), 0.1));
    CHECK_FALSE(charge_decision(s4, parking("2024-03-01T09:00:00", "2024-03-01T09:19:59"), 0.1));
}

TEST_CASE("workplace window is weekday daytime only") {
    const auto s1 = scenario(1);
    // Friday 08:00-20:00 full day
    CHECK(charge_decision(s1, parking("2024-03-01T07:00:00", "2024-03-01T21:00:00"), 0.5) ==
          ChargeInterval{ts("2024-03-01T08:00:00"), ts("2024-03-01T20:00:00")});
    // Saturday: no window
    CHECK_FALSE(charge_decision(s1, parking("2024-03-02T07:00:00", "2024-03-02T21:00:00"), 0.5));
    // weekend parking reaching Monday morning: Monday instance 08:00-14:00
    CHECK(charge_decision(s1, parking("2024-03-02T07:00:00", "2024-03-04T14:00:00"), 0.5) ==
          ChargeInterval{ts("2024-03-04T08:00:00"), ts("2024-03-04T14:00:00")});
    // first instance too short, second qualifies
    CHECK(charge_decision(s1, parking("2024-03-04T17:00:00", "2024-03-05T19:00:00"), 0.5) ==
          ChargeInterval{ts("2024-03-05T08:00:00"), ts("2024-03-05T19:00:00")});
}

TEST_CASE("overnight instance belongs to its start day") {
    // Parking starts after midnight: the instance that began the previous evening counts.
    const auto s3 = scenario(3);
    CHECK(charge_decision(s3, parking("2024-03-02T01:00:00", "2024-03-02T10:00:00"), 0.5) ==
          ChargeInterval{ts("2024-03-02T01:00:00"), ts("2024-03-02T08:00:00")});
    // Only a weekday-restricted overnight window: Friday night instance exists, Saturday's does not.
    ChargingPolicy p = s3;
    p.window = WeeklyWindow{WeekdaySet::monday_to_friday(), 20h, 8h};
    CHECK(charge_decision(p, parking("2024-03-02T01:00:00", "2024-03-02T10:00:00"), 0.5));
    CHECK_FALSE(charge_decision(p, parking("2024-03-02T21:00:00", "2024-03-03T10:00:00"), 0.5));
}

TEST_CASE("decisions are invariant under whole-week shifts and contained in the parking") {
    Xoshiro256StarStar rng(11);
    for (int i = 0; i < 3000; ++i) {
        const auto& policy = scenario(1 + i % 4);
        const Timestamp start = ts("2024-01-01T00:00:00") + Seconds{static_cast<long>(rng.uniform(0, 28 * 86400))};
        const Seconds len{static_cast<long>(rng.uniform(120, 3 * 86400))};
        const ParkingEvent p{"u", start, start + len};
        const double soc = rng.uniform(0, 1);
        const auto d = charge_decision(policy, p, soc);
        const ParkingEvent shifted{"u", p.start_ts + weeks{3}, p.end_ts + weeks{3}};
        const auto ds = charge_decision(policy, shifted, soc);
        REQUIRE(d.has_value() == ds.has_value());
        if (d) {
            CHECK(ds->begin_ts - d->begin_ts == weeks{3});
            CHECK(ds->latest_end_ts - d->latest_end_ts == weeks{3});
            CHECK(d->begin_ts >= p.start_ts);
            CHECK(d->latest_end_ts <= p.end_ts);
            CHECK(d->length() >= policy.min_duration);
            CHECK(soc < policy.soc_trigger);
        }
    }
}

TEST_CASE("delivered energy examples") {
    const ChargeInterval six_hours{ts("2024-03-01T08:00:00"), ts("2024-03-01T14:00:00")};
    const auto full = charge_delivered(scenario(1), six_hours, 0.0, 40.0);
    CHECK(std::abs(full.energy_kwh - 40.0) <= 1e-9);
    CHECK(full.duration_s / 3600.0 == doctest::Approx(40.0 / 7.4));
    CHECK(full.end_ts == six_hours.begin_ts + Seconds{std::llround(40.0 / 7.4 * 3600.0)});

    const ChargeInterval twenty{ts("2024-03-01T08:00:00"), ts("2024-03-01T08:20:00")};
    CHECK(std::abs(charge_delivered(scenario(4), twenty, 5.0, 21.3).energy_kwh - 16.3) <= 1e-9);
    CHECK(charge_delivered(scenario(4), twenty, 21.3, 21.3).energy_kwh == 0.0);

    const ChargeInterval one_hour{ts("2024-03-01T08:00:00"), ts("2024-03-01T09:00:00")};
    CHECK(std::abs(charge_delivered(scenario(2), one_hour, 0.0, 40.0).energy_kwh - 7.4) <= 1e-9);
}

TEST_CASE("policy validation") {
    ChargingPolicy p = scenario(1);
    p.power_kw = 0;
    CHECK_THROWS_AS(p.validate(), Error);
    p = scenario(1);
    p.soc_trigger = 1.5;
    CHECK_THROWS_AS(p.validate(), Error);
    p = scenario(1);
    p.min_duration = 0s;
    CHECK_THROWS_AS(p.validate(), Error);
    p = scenario(1);
    p.window = WeeklyWindow{WeekdaySet::all(), 8h, 8h};
    CHECK_THROWS_AS(p.validate(), Error);
    p.window = WeeklyWindow{WeekdaySet{}, 8h, 9h};
    CHECK_THROWS_AS(p.validate(), Error);
}
