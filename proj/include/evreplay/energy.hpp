// Copyright 2026 The evreplay Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <string_view>

#include "evreplay/ingest.hpp"

namespace evr {

/// Usable battery capacity plus constant per-road-category consumption.
/// Rates are independent data; no ordering between them is assumed.
struct VehicleSpec {
    std::string name;
    double usable_capacity_kwh = 0.0;
    double rate_urban_wh_per_km = 0.0;
    double rate_highway_wh_per_km = 0.0;
    double rate_combined_wh_per_km = 0.0;
    double estimated_range_km = 0.0;  // informational

    /// Extra-urban driving is charged at the combined rate.
    double rate_extraurban_wh_per_km() const { return rate_combined_wh_per_km; }

    /// Throws Error(Usage) unless capacity and every rate are > 0.
    void validate() const;

    bool operator==(const VehicleSpec&) const = default;
};

/// Fiat 500e, Renault Megane E-Tech, Tesla Model 3, Audi A6 e-tron.
std::span<const VehicleSpec> builtin_vehicles();

/// Exact-name lookup among the built-ins; nullptr when absent.
const VehicleSpec* find_builtin_vehicle(std::string_view name);

double trip_energy_kwh(const VehicleSpec& spec, double km_urban, double km_extraurban,
                       double km_highway);

inline double trip_energy_kwh(const VehicleSpec& spec, const TripRecord& trip) {
    return trip_energy_kwh(spec, trip.km_urban, trip.km_extraurban, trip.km_highway);
}

}  // namespace evr
