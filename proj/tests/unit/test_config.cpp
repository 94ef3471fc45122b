// Copyright 2026 The evreplay Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "evreplay/config.hpp"
#include "evreplay/error.hpp"

using namespace evr;
using namespace std::chrono_literals;

namespace {

ErrorKind kind_of(std::string_view text) {
    try {
        run_config_from_json(text);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error for " << text);
    return ErrorKind::Data;
}

}  // namespace

TEST_CASE("defaults") {
    const auto c = run_config_from_json(R"({"input":"trips.csv","output":"out"})");
    CHECK(c.inputs == std::vector<std::string>{"trips.csv"});
    CHECK(c.output_dir == "out");
    CHECK(c.vehicles.size() == 4);
    REQUIRE(c.policies.size() == 4);
    CHECK(c.policies[2] == scenario(3));
    CHECK(c.initial_soc_fraction == 1.0);
    CHECK_FALSE(c.observation_days.has_value());
    CHECK(c.bins == 20);
    CHECK_FALSE(c.trace);
    CHECK(c.jobs == 0);
}

TEST_CASE("vehicles and policies resolve by name, number or object") {
    const auto c = run_config_from_json(R"({
        "input": ["a.csv", "b.csv"],
        "vehicles": ["Fiat 500e", {"name": "Van", "usable_capacity_kwh": 75,
                     "rate_urban_wh_per_km": 200, "rate_highway_wh_per_km": 280,
                     "rate_combined_wh_per_km": 240}],
        "policies": [1, "2", "scenario3", "S4",
                     {"name": "depot", "power_kw": 22, "soc_trigger": 0.5,
                      "min_duration_minutes": 90,
                      "window": {"days": ["Sat", "Sun"], "start": "22:30", "end": "06:00"}}],
        "initial_soc": 0.5, "observation_days": 30, "bins": 10, "trace": true, "jobs": 3})");
    CHECK(c.inputs.size() == 2);
    REQUIRE(c.vehicles.size() == 2);
    CHECK(c.vehicles[1].rate_extraurban_wh_per_km() == 240);
    REQUIRE(c.policies.size() == 5);
    CHECK(c.policies[3] == scenario(4));
    const auto& depot = c.policies[4];
    CHECK(depot.min_duration == 90min);
    const auto w = std::get<WeeklyWindow>(depot.window);
    CHECK(w.days.size() == 2);
    CHECK(w.start == 22h + 30min);
    CHECK(w.end == 6h);
    CHECK(c.observation_days == 30.0);
    CHECK(c.trace);
    CHECK(c.jobs == 3);

    const auto round = run_config_from_json(c.snapshot().dump());
    CHECK(round.policies == c.policies);
    CHECK(round.vehicles == c.vehicles);
}

TEST_CASE("configuration errors are usage errors") {
    CHECK(kind_of(R"({"vehicles":["Nope"]})") == ErrorKind::Usage);
    CHECK(kind_of(R"({"policies":[5]})") == ErrorKind::Usage);
    CHECK(kind_of(R"({"policies":["scenario9"]})") == ErrorKind::Usage);
    CHECK(kind_of(R"({"unknown":1})") == ErrorKind::Usage);
    CHECK(kind_of(R"({"initial_soc":1.5})") == ErrorKind::Usage);
    CHECK(kind_of(R"({"bins":0})") == ErrorKind::Usage);
    CHECK(kind_of(R"({"observation_days":0})") == ErrorKind::Usage);
    CHECK(kind_of(R"({"vehicles":["Fiat 500e","Fiat 500e"]})") == ErrorKind::Usage);
    CHECK(kind_of(R"({"vehicles":[]})") == ErrorKind::Usage);
    CHECK(kind_of(R"({"policies":[{"name":"x","power_kw":7,"soc_trigger":0.5,"min_duration_minutes":10,"window":{"days":["Xyz"],"start":"08:00","end":"09:00"}}]})") ==
          ErrorKind::Usage);
    CHECK(kind_of(R"({"policies":[{"name":"x","power_kw":7,"soc_trigger":0.5,"min_duration_minutes":10,"window":{"days":["Mon"],"start":"8:00","end":"09:00"}}]})") ==
          ErrorKind::Usage);
    CHECK(kind_of("[1,2]") == ErrorKind::Usage);
    CHECK(kind_of("{") == ErrorKind::Usage);
    CHECK(kind_of(R"({"bins":"ten"})") == ErrorKind::Usage);
}
