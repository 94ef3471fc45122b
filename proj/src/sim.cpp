// Copyright 2026 The evreplay Authors
// SPDX-License-Identifier: Apache-2.0

#include "evreplay/sim.hpp"

#include <algorithm>
#include <charconv>

#include "evreplay/error.hpp"
#include "evreplay/parallel.hpp"

namespace evr {

namespace {

void append_number(std::string& out, double value) {
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    out.append(buf, end);
}

[[noreturn]] void timeline_error(const UserTimeline& t, const std::string& what) {
    throw Error(ErrorKind::Data, "malformed timeline for user '" + t.user_id + "': " + what);
}

}  // namespace

void validate_timeline(const UserTimeline& t) {
    const auto& trips = t.trips;
    const auto& parkings = t.parkings;
    if (trips.empty()) {
        if (!parkings.empty()) {
            timeline_error(t, "parkings without trips");
        }
        return;
    }
    if (parkings.size() != trips.size() - 1) {
        timeline_error(t, std::to_string(trips.size()) + " trips but " +
                              std::to_string(parkings.size()) + " parkings");
    }
    for (std::size_t i = 0; i < trips.size(); ++i) {
        if (trips[i].end_ts <= trips[i].start_ts) {
            timeline_error(t, "trip " + std::to_string(i) + " does not end after it starts");
        }
        if (i + 1 < trips.size()) {
            const auto& p = parkings[i];
            if (p.start_ts != trips[i].end_ts || p.end_ts != trips[i + 1].start_ts) {
                timeline_error(t, "parking " + std::to_string(i) + " does not tile the gap");
            }
            if (p.end_ts < p.start_ts) {
                timeline_error(t, "trip " + std::to_string(i + 1) + " overlaps its predecessor");
            }
        }
    }
}

SimulationResult simulate_user(const UserTimeline& timeline, const VehicleSpec& spec,
                               const ChargingPolicy& policy, double initial_soc_fraction) {
    validate_timeline(timeline);

    SimulationResult r;
    r.user_id = timeline.user_id;
    r.vehicle = spec.name;
    r.policy = policy.name;
    r.capacity_kwh = spec.usable_capacity_kwh;
    r.initial_soc_kwh = std::clamp(initial_soc_fraction, 0.0, 1.0) * spec.usable_capacity_kwh;
    r.trips.reserve(timeline.trips.size());

    double soc = r.initial_soc_kwh;
    const double capacity = spec.usable_capacity_kwh;
    const auto& trips = timeline.trips;
    for (std::size_t i = 0; i < trips.size(); ++i) {
        TripOutcome out;
        out.trip_index = i;
        out.energy_required_kwh = trip_energy_kwh(spec, trips[i]);
        out.soc_before_kwh = soc;
        if (out.energy_required_kwh <= soc + kEnergyTolerance) {
            out.feasible = true;
            soc = std::max(0.0, soc - out.energy_required_kwh);
        } else {
            soc = 0.0;
        }
        out.soc_after_kwh = soc;
        r.trips.push_back(out);

        if (i + 1 == trips.size()) {
            break;
        }
        const auto& parking = timeline.parkings[i];
        if (const auto decision = charge_decision(policy, parking, soc / capacity)) {
            const auto delivery = charge_delivered(policy, *decision, soc, capacity);
            if (delivery.energy_kwh > kEnergyTolerance) {
                soc = std::min(capacity, soc + delivery.energy_kwh);
                r.charges.push_back({decision->begin_ts, delivery.end_ts, delivery.energy_kwh});
            }
        }
    }
    r.final_soc_kwh = soc;
    return r;
}

double conservation_residual(const SimulationResult& r) {
    double balance = r.initial_soc_kwh;
    for (const auto& c : r.charges) {
        balance += c.energy_kwh;
    }
    for (const auto& t : r.trips) {
        balance -= t.feasible ? t.energy_required_kwh : t.soc_before_kwh;
    }
    return balance - r.final_soc_kwh;
}

MatrixRun simulate_matrix(std::span<const UserTimeline> users, std::span<const VehicleSpec> specs,
                          std::span<const ChargingPolicy> policies, double initial_soc_fraction,
                          unsigned jobs) {
    const std::size_t per_user = specs.size() * policies.size();
    MatrixRun run;
    run.results.resize(users.size() * per_user);
    std::vector<std::string> errors(users.size());
    parallel_for(users.size(), jobs, [&](std::size_t u) {
        try {
            validate_timeline(users[u]);
            for (std::size_t v = 0; v < specs.size(); ++v) {
                for (std::size_t p = 0; p < policies.size(); ++p) {
                    run.results[u * per_user + v * policies.size() + p] =
                        simulate_user(users[u], specs[v], policies[p], initial_soc_fraction);
                }
            }
        } catch (const Error& e) {
            errors[u] = e.what();
        }
    });
    for (std::size_t u = 0; u < users.size(); ++u) {
        if (!errors[u].empty()) {
            run.failures.push_back({users[u].user_id, errors[u]});
        }
    }
    return run;
}

void append_trace_rows(std::string& out, const UserTimeline& timeline,
                       const SimulationResult& result) {
    for (const auto& t : result.trips) {
        out.append(result.user_id);
        out.push_back(',');
        out.append(std::to_string(t.trip_index));
        out.push_back(',');
        append_timestamp(out, timeline.trips[t.trip_index].start_ts);
        out.push_back(',');
        append_number(out, t.energy_required_kwh);
        out.push_back(',');
        append_number(out, t.soc_before_kwh);
        out.push_back(',');
        append_number(out, t.soc_after_kwh);
        out.append(t.feasible ? ",true\n" : ",false\n");
    }
}

}  // namespace evr
