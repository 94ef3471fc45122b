// Copyright 2026 The evreplay Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "evreplay/error.hpp"
#include "evreplay/random.hpp"
#include "evreplay/sim.hpp"
#include "evreplay/synthgen.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace evr;
using evr::test::timeline;
using evr::test::trip;
using namespace std::chrono_literals;

namespace {

const VehicleSpec& fiat() {
    return *find_builtin_vehicle("Fiat 500e");
}

std::vector<ChargingPolicy> scenarios() {
    return {scenario(1), scenario(2), scenario(3), scenario(4)};
}

ChargingPolicy never_charging() {
    ChargingPolicy p = scenario(2);
    p.name = "never";
    p.min_duration = Seconds{10LL * 365 * 86400};
    return p;
}

std::vector<UserTimeline> synthetic_users(std::size_t n, int days, std::uint64_t seed,
                                          std::string_view preset = "mixed-fleet") {
    auto profile = preset_profile(preset);
    profile.n_users = n;
    profile.horizon_days = days;
    profile.seed = seed;
    return clean_trip_log(parse_trip_log(generate(profile))).users;
}

}  // namespace

TEST_CASE("golden overnight trace") {
    // Friday evening drive, overnight parking inside the 20:00-08:00 window, long drive next morning.
    const auto t = timeline({trip("g", "2024-03-01T19:00:00", "2024-03-01T20:00:00", 0, 0, 50),
                             trip("g", "2024-03-02T08:00:00", "2024-03-02T09:30:00", 0, 0, 135)});
    const auto r = simulate_user(t, fiat(), scenario(3));
    REQUIRE(r.trips.size() == 2);
    CHECK(r.initial_soc_kwh == 21.3);
    CHECK(std::abs(r.trips[0].energy_required_kwh - 8.5) <= 1e-9);
    CHECK(r.trips[0].soc_before_kwh == 21.3);
    CHECK(std::abs(r.trips[0].soc_after_kwh - 12.8) <= 1e-9);
    CHECK(r.trips[0].feasible);
    REQUIRE(r.charges.size() == 1);
    CHECK(r.charges[0].begin_ts == test::ts("2024-03-01T20:00:00"));
    CHECK(std::abs(r.charges[0].energy_kwh - 8.5) <= 1e-9);
    CHECK(std::abs(r.trips[1].soc_before_kwh - 21.3) <= 1e-9);
    CHECK(std::abs(r.trips[1].energy_required_kwh - 22.95) <= 1e-9);
    CHECK_FALSE(r.trips[1].feasible);
    CHECK(r.trips[1].soc_after_kwh == 0.0);
    CHECK(r.final_soc_kwh == 0.0);
    CHECK(std::abs(conservation_residual(r)) <= 1e-9);
}

TEST_CASE("exactly the remaining energy is feasible") {
    // 21.3 kWh = 125.294... km highway; use urban distance for an exact value: 21.3 / 0.101 km.
    const double km = 21.3 / 0.101;
    const auto t = timeline({trip("e", "2024-03-01T06:00:00", "2024-03-01T18:00:00", km)});
    const auto r = simulate_user(t, fiat(), scenario(2));
    CHECK(r.trips[0].feasible);
    CHECK(r.trips[0].soc_after_kwh <= 1e-9);
    const auto over = timeline({trip("e", "2024-03-01T06:00:00", "2024-03-01T18:00:00", km + 0.001)});
    CHECK_FALSE(simulate_user(over, fiat(), scenario(2)).trips[0].feasible);
}

TEST_CASE("empty timeline") {
    UserTimeline t;
    t.user_id = "empty";
    const auto r = simulate_user(t, fiat(), scenario(1), 0.4);
    CHECK(r.trips.empty());
    CHECK(r.charges.empty());
    CHECK(r.final_soc_kwh == doctest::Approx(0.4 * 21.3));
}

TEST_CASE("pure discharge strictly decreases") {
    const auto t = timeline({trip("d", "2024-03-01T08:00:00", "2024-03-01T08:30:00", 10),
                             trip("d", "2024-03-01T12:00:00", "2024-03-01T12:30:00", 10),
                             trip("d", "2024-03-01T17:00:00", "2024-03-01T17:30:00", 10)});
    const auto r = simulate_user(t, fiat(), never_charging());
    double last = r.initial_soc_kwh;
    for (const auto& o : r.trips) {
        CHECK(o.feasible);
        CHECK(o.soc_after_kwh < last);
        last = o.soc_after_kwh;
    }
    CHECK(r.charges.empty());
}

TEST_CASE("malformed timeline is a data error naming the user") {
    auto t = timeline({trip("bad", "2024-03-01T08:00:00", "2024-03-01T08:30:00", 10),
                       trip("bad", "2024-03-01T12:00:00", "2024-03-01T12:30:00", 10)});
    t.parkings.clear();
    try {
        simulate_user(t, fiat(), scenario(1));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Data);
        CHECK(std::string(e.what()).find("bad") != std::string::npos);
    }
}

TEST_CASE("matrix cardinality, isolation and determinism") {
    auto users = synthetic_users(2, 14, 5);
    REQUIRE(users.size() == 2);
    const auto specs = builtin_vehicles();
    const auto policies = scenarios();
    const auto run = simulate_matrix(users, specs, policies, 1.0, 3);
    CHECK(run.results.size() == 32);
    CHECK(run.failures.empty());
    const auto again = simulate_matrix(users, specs, policies, 1.0, 1);
    for (std::size_t i = 0; i < run.results.size(); ++i) {
        REQUIRE(run.results[i].trips.size() == again.results[i].trips.size());
        CHECK(run.results[i].final_soc_kwh == again.results[i].final_soc_kwh);
        for (std::size_t k = 0; k < run.results[i].trips.size(); ++k) {
            CHECK(run.results[i].trips[k].soc_after_kwh == again.results[i].trips[k].soc_after_kwh);
        }
    }
    users[0].parkings.pop_back();
    const auto broken = simulate_matrix(users, specs, policies, 1.0, 2);
    REQUIRE(broken.failures.size() == 1);
    CHECK(broken.failures[0].user_id == users[0].user_id);
    CHECK(broken.results[16].trips.size() == users[1].trips.size());
}

TEST_CASE("event-driven engine matches the one-second oracle") {
    const auto users = synthetic_users(12, 5, 99, "long-hauler");
    auto more = synthetic_users(12, 5, 42);
    std::vector<UserTimeline> all = users;
    all.insert(all.end(), more.begin(), more.end());
    for (const auto& u : all) {
        for (const auto& spec : builtin_vehicles()) {
            for (const auto& policy : scenarios()) {
                for (double init : {1.0, 0.3}) {
                    const auto r = simulate_user(u, spec, policy, init);
                    const auto o = oracle::simulate(u.trips, spec, policy, init);
                    REQUIRE(r.trips.size() == o.trips.size());
                    for (std::size_t i = 0; i < r.trips.size(); ++i) {
                        CHECK(r.trips[i].feasible == o.trips[i].feasible);
                        CHECK(std::abs(r.trips[i].soc_after_kwh - o.trips[i].soc_after_kwh) <= 1e-6);
                    }
                    CHECK(r.charges.size() == o.sessions);
                    CHECK(std::abs(conservation_residual(r)) <= kConservationTolerance);
                }
            }
        }
    }
}

TEST_CASE("state of charge stays within bounds") {
    for (const auto& u : synthetic_users(20, 10, 3, "long-hauler")) {
        for (const auto& spec : builtin_vehicles()) {
            for (const auto& policy : scenarios()) {
                const auto r = simulate_user(u, spec, policy);
                for (const auto& o : r.trips) {
                    CHECK(o.soc_before_kwh >= 0.0);
                    CHECK(o.soc_before_kwh <= spec.usable_capacity_kwh + 1e-9);
                    CHECK(o.soc_after_kwh >= 0.0);
                }
            }
        }
    }
}

TEST_CASE("never charging: feasible trips are the within-budget prefix") {
    for (const auto& u : synthetic_users(30, 10, 17)) {
        for (const auto& spec : builtin_vehicles()) {
            const auto r = simulate_user(u, spec, never_charging());
            CHECK(r.charges.empty());
            double used = 0.0;
            bool exhausted = false;
            for (std::size_t i = 0; i < u.trips.size(); ++i) {
                const double e = trip_energy_kwh(spec, u.trips[i]);
                bool expect = false;
                if (!exhausted && used + e <= spec.usable_capacity_kwh + 1e-9) {
                    used += e;
                    expect = true;
                } else {
                    exhausted = true;
                    expect = e == 0.0;
                }
                CHECK(r.trips[i].feasible == expect);
            }
        }
    }
}

TEST_CASE("unbounded charging makes every single-charge trip feasible") {
    ChargingPolicy p;
    p.name = "unbounded";
    p.power_kw = 1e9;
    p.soc_trigger = 1.0;
    p.min_duration = 1s;
    for (const auto& u : synthetic_users(20, 10, 23, "long-hauler")) {
        for (const auto& spec : builtin_vehicles()) {
            const auto r = simulate_user(u, spec, p);
            for (std::size_t i = 0; i < r.trips.size(); ++i) {
                if (r.trips[i].energy_required_kwh <= spec.usable_capacity_kwh) {
                    CHECK(r.trips[i].feasible);
                }
            }
        }
    }
}

TEST_CASE("trace rows") {
    const auto t = timeline({trip("g", "2024-03-01T19:00:00", "2024-03-01T20:00:00", 0, 0, 50),
                             trip("g", "2024-03-02T08:00:00", "2024-03-02T09:30:00", 0, 0, 135)});
    std::string out;
    append_trace_rows(out, t, simulate_user(t, fiat(), scenario(3)));
    CHECK(out ==
          "g,0,2024-03-01T19:00:00,8.5,21.3,12.8,true\n"
          "g,1,2024-03-02T08:00:00,22.95,21.3,0,false\n");
}
