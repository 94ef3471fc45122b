// Copyright 2026 The evreplay Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "evreplay/charging.hpp"
#include "evreplay/energy.hpp"
#include "evreplay/ingest.hpp"

namespace evr {

/// Comparison slack for energy values (kWh).
inline constexpr double kEnergyTolerance = 1e-9;
/// Slack for the end-to-end energy balance of one simulation (kWh).
inline constexpr double kConservationTolerance = 1e-6;

struct TripOutcome {
    std::size_t trip_index = 0;
    double energy_required_kwh = 0.0;
    double soc_before_kwh = 0.0;
    double soc_after_kwh = 0.0;  ///< 0 when infeasible
    bool feasible = false;
};

/// A charging session that delivered a positive amount of energy.
struct ChargeEvent {
    Timestamp begin_ts{};
    Timestamp end_ts{};
    double energy_kwh = 0.0;
};

struct SimulationResult {
    std::string user_id;
    std::string vehicle;
    std::string policy;
    double capacity_kwh = 0.0;
    double initial_soc_kwh = 0.0;
    double final_soc_kwh = 0.0;
    std::vector<TripOutcome> trips;
    std::vector<ChargeEvent> charges;
};

/// Throws Error(Data) naming the user when trips and parkings do not form an
/// alternating, gap-free, chronologically ordered sequence.
void validate_timeline(const UserTimeline& timeline);

/// Event-driven replay of one user's timeline. A trip needing more than the
/// available energy (beyond kEnergyTolerance) is infeasible and empties the
/// battery; SoC then stays at 0 until the next charge.
SimulationResult simulate_user(const UserTimeline& timeline, const VehicleSpec& spec,
                               const ChargingPolicy& policy, double initial_soc_fraction = 1.0);

/// initial + charged - consumed(feasible) - soc_before(infeasible) - final.
double conservation_residual(const SimulationResult& result);

struct MatrixFailure {
    std::string user_id;
    std::string message;
};

struct MatrixRun {
    /// Index (u * vehicles + v) * policies + p; empty entries for failed users.
    std::vector<SimulationResult> results;
    std::vector<MatrixFailure> failures;
};

/// Every user x vehicle x policy combination. Users run in parallel on up to
/// `jobs` threads; a malformed timeline fails only its own user.
MatrixRun simulate_matrix(std::span<const UserTimeline> users, std::span<const VehicleSpec> specs,
                          std::span<const ChargingPolicy> policies,
                          double initial_soc_fraction = 1.0, unsigned jobs = 1);

/// Per-trip trace, one file per vehicle x policy pair.
inline constexpr std::string_view kTraceHeader =
    "user_id,trip_index,start_ts,energy_kwh,soc_before_kwh,soc_after_kwh,feasible";
void append_trace_rows(std::string& out, const UserTimeline& timeline,
                       const SimulationResult& result);

}  // namespace evr
