// Copyright 2026 The evreplay Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "evreplay/error.hpp"
#include "evreplay/metrics.hpp"
#include "evreplay/random.hpp"
#include "fixtures.hpp"

using namespace evr;
using evr::test::trip;

namespace {

SimulationResult result_with(std::initializer_list<std::pair<bool, double>> trips,
                             std::size_t charges, double capacity = 100.0) {
    SimulationResult r;
    r.user_id = "m";
    r.vehicle = "v";
    r.policy = "p";
    r.capacity_kwh = capacity;
    std::size_t i = 0;
    for (const auto& [feasible, soc] : trips) {
        r.trips.push_back({i++, 1.0, 1.0, soc, feasible});
    }
    r.charges.resize(charges);
    return r;
}

}  // namespace

TEST_CASE("per-user metric examples") {
    const auto m = user_metrics(result_with({{true, 80.0}, {false, 60.0}}, 24), 365.25);
    REQUIRE(m.has_value());
    CHECK(m->feasible_trip_pct == 50.0);
    CHECK(std::abs(m->monthly_charges - 2.0) <= 1e-9);
    CHECK(kDaysPerMonth == 30.4375);
    CHECK(m->avg_soc_after_trip_pct == doctest::Approx(70.0));
    CHECK_FALSE(m->suitable);
    CHECK_FALSE(user_metrics(result_with({}, 0), 10).has_value());
    CHECK_THROWS_AS(user_metrics(result_with({{true, 1}}, 0), 0.0), Error);
}

TEST_CASE("suitability threshold is inclusive") {
    CHECK(is_suitable(99.5));
    CHECK(is_suitable(99.0));
    CHECK_FALSE(is_suitable(98.0));
    CHECK_FALSE(is_suitable(98.999));
}

TEST_CASE("characterization examples") {
    const auto days = characterize_user(
        "c", std::vector{trip("c", "2024-03-01T08:00:00", "2024-03-01T08:10:00", 1),
                         trip("c", "2024-03-01T09:00:00", "2024-03-01T09:10:00", 1),
                         trip("c", "2024-03-01T10:00:00", "2024-03-01T10:10:00", 1),
                         trip("c", "2024-03-03T08:00:00", "2024-03-03T08:10:00", 1),
                         trip("c", "2024-03-03T09:00:00", "2024-03-03T09:10:00", 1),
                         trip("c", "2024-03-03T10:00:00", "2024-03-03T10:10:00", 1),
                         trip("c", "2024-03-03T11:00:00", "2024-03-03T11:10:00", 1),
                         trip("c", "2024-03-03T12:00:00", "2024-03-03T12:10:00", 1)});
    CHECK(days.active_days == 2);
    CHECK(days.avg_daily_trips == 4.0);

    const auto two_hours = characterize_user(
        "c", std::vector{trip("c", "2024-03-01T08:00:00", "2024-03-01T09:00:00", 30),
                         trip("c", "2024-03-01T17:00:00", "2024-03-01T18:00:00", 30)});
    CHECK(std::abs(two_hours.utilization_pct - 8.33) <= 0.01);
    CHECK(two_hours.utilization_pct == doctest::Approx(100.0 / 12.0));

    const auto one = characterize_user("c", std::vector{trip("c", "2024-03-01T08:00:00", "2024-03-01T09:00:00", 20, 10, 10)});
    CHECK(one.avg_daily_distance_km == 40.0);
    CHECK_THROWS_AS(characterize_user("c", std::vector<TripRecord>{}), Error);
}

TEST_CASE("aggregate examples") {
    const std::vector<double> two = {0, 100};
    const auto a = aggregate(two);
    CHECK(a.mean == 50);
    CHECK(a.median == 50);
    CHECK(a.std == 50);

    const std::vector<double> single = {42};
    const auto s = aggregate(single, 5);
    CHECK(s.q1 == 42);
    CHECK(s.median == 42);
    CHECK(s.q3 == 42);
    CHECK(s.std == 0);
    CHECK(s.histogram[0].count == 1);
    CHECK(s.histogram[4].cdf == 1.0);

    const std::vector<double> four = {4, 1, 3, 2};
    const auto q = aggregate(four, 3);
    CHECK(q.median == 2.5);
    CHECK(q.q1 == 1.75);
    CHECK(q.q3 == 3.25);
    CHECK(q.min == 1);
    CHECK(q.max == 4);
    CHECK(q.histogram[0].count == 1);
    CHECK(q.histogram[1].count == 1);
    CHECK(q.histogram[2].count == 2);  // last bin closed on the right
    CHECK(q.histogram[2].cdf == 1.0);
    CHECK_THROWS_AS(aggregate(std::vector<double>{}), Error);
}

TEST_CASE("aggregate is permutation invariant and scales linearly") {
    Xoshiro256StarStar rng(5);
    for (int round = 0; round < 50; ++round) {
        std::vector<double> v(1 + static_cast<std::size_t>(rng.uniform(0, 200)));
        for (auto& x : v) x = rng.uniform(-50, 150);
        auto shuffled = v;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        const auto a = aggregate(v, 7);
        const auto b = aggregate(shuffled, 7);
        CHECK(a.mean == b.mean);
        CHECK(a.std == b.std);
        CHECK(a.median == b.median);
        for (std::size_t k = 0; k < 7; ++k) CHECK(a.histogram[k].count == b.histogram[k].count);
        std::size_t total = 0;
        for (const auto& bin : a.histogram) total += bin.count;
        CHECK(total == v.size());

        std::vector<double> scaled = v;
        for (auto& x : scaled) x *= 4.0;
        const auto c = aggregate(scaled, 7);
        CHECK(c.mean == doctest::Approx(4.0 * a.mean));
        CHECK(c.std == doctest::Approx(4.0 * a.std));
        CHECK(c.q1 == doctest::Approx(4.0 * a.q1));
        CHECK(c.q3 == doctest::Approx(4.0 * a.q3));
        CHECK(a.min <= a.q1);
        CHECK(a.q1 <= a.median);
        CHECK(a.median <= a.q3);
        CHECK(a.q3 <= a.max);
    }
}

TEST_CASE("scenario-vehicle matrix") {
    std::vector<UserMetrics> metrics;
    const std::vector<std::string> policies = {"scenario1", "scenario2", "scenario3", "scenario4"};
    std::vector<std::string> vehicles;
    for (const auto& v : builtin_vehicles()) vehicles.push_back(v.name);
    Xoshiro256StarStar rng(9);
    for (const auto& p : policies) {
        for (const auto& v : vehicles) {
            for (int u = 0; u < 5; ++u) {
                UserMetrics m;
                m.user_id = "u" + std::to_string(u);
                m.policy = p;
                m.vehicle = v;
                m.feasible_trip_pct = rng.uniform(90, 100);
                m.monthly_charges = rng.uniform(0, 20);
                m.avg_soc_after_trip_pct = rng.uniform(0, 100);
                m.suitable = is_suitable(m.feasible_trip_pct);
                metrics.push_back(m);
            }
        }
    }
    const auto cells = scenario_vehicle_matrix(metrics, policies, vehicles);
    REQUIRE(cells.size() == 16);
    CHECK(cells[0].policy == "scenario1");
    CHECK(cells[1].vehicle == vehicles[1]);
    for (const auto& cell : cells) {
        std::vector<double> feasible;
        for (const auto& m : metrics) {
            if (m.policy == cell.policy && m.vehicle == cell.vehicle) feasible.push_back(m.feasible_trip_pct);
        }
        CHECK(cell.users == 5);
        CHECK(cell.mean_feasible_trip_pct == doctest::Approx(aggregate(feasible).mean).epsilon(1e-12));
    }
    for (auto& m : metrics) {
        m.feasible_trip_pct = 100.0;
        m.suitable = true;
    }
    for (const auto& cell : scenario_vehicle_matrix(metrics, policies, vehicles)) {
        CHECK(cell.mean_feasible_trip_pct == 100.0);
        CHECK(cell.suitable_share_pct == 100.0);
    }
    const std::vector<std::string> missing = {"nope"};
    CHECK_THROWS_AS(scenario_vehicle_matrix(metrics, missing, vehicles), Error);
}

TEST_CASE("csv rows quote names when needed") {
    UserMetrics m;
    m.user_id = "a,b";
    m.vehicle = "Fiat 500e";
    m.policy = "p\"q";
    m.feasible_trip_pct = 100;
    m.monthly_charges = 2.5;
    m.avg_soc_after_trip_pct = 70;
    m.suitable = true;
    std::string out;
    append_user_metrics_row(out, m);
    CHECK(out == "\"a,b\",Fiat 500e,\"p\"\"q\",100,2.5,70,true\n");
}
