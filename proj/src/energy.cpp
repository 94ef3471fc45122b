// Copyright 2026 The evreplay Authors
// SPDX-License-Identifier: Apache-2.0

#include "evreplay/energy.hpp"

#include <array>

#include "evreplay/error.hpp"

namespace evr {

namespace {

// name, usable kWh, urban / highway / combined Wh/km, range km
const std::array<VehicleSpec, 4> kBuiltins{{
    {"Fiat 500e", 21.3, 101.0, 170.0, 133.0, 135.0},
    {"Renault Megane E-Tech", 40.0, 103.0, 167.0, 133.0, 260.0},
    {"Tesla Model 3", 57.5, 93.0, 142.0, 116.0, 420.0},
    {"Audi A6 e-tron", 94.9, 109.0, 161.0, 134.0, 610.0},
}};

}  // namespace

void VehicleSpec::validate() const {
    if (name.empty()) {
        throw Error(ErrorKind::Usage, "vehicle name must not be empty");
    }
    if (!(usable_capacity_kwh > 0.0)) {
        throw Error(ErrorKind::Usage, "vehicle '" + name + "': usable capacity must be > 0");
    }
    if (!(rate_urban_wh_per_km > 0.0) || !(rate_highway_wh_per_km > 0.0) ||
        !(rate_combined_wh_per_km > 0.0)) {
        throw Error(ErrorKind::Usage, "vehicle '" + name + "': consumption rates must be > 0");
    }
}

std::span<const VehicleSpec> builtin_vehicles() {
    return kBuiltins;
}

const VehicleSpec* find_builtin_vehicle(std::string_view name) {
    for (const auto& spec : kBuiltins) {
        if (spec.name == name) {
            return &spec;
        }
    }
    return nullptr;
}

double trip_energy_kwh(const VehicleSpec& spec, double km_urban, double km_extraurban,
                       double km_highway) {
    const double wh = km_urban * spec.rate_urban_wh_per_km +
                      km_extraurban * spec.rate_extraurban_wh_per_km() +
                      km_highway * spec.rate_highway_wh_per_km;
    return wh / 1000.0;
}

}  // namespace evr
