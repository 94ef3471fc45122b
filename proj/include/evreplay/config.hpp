// Copyright 2026 The evreplay Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "evreplay/charging.hpp"
#include "evreplay/energy.hpp"

namespace evr {

// Config files are JSON. Every parse/resolve error is Error(Usage).

/// {"name", "usable_capacity_kwh", "rate_urban_wh_per_km",
///  "rate_highway_wh_per_km", "rate_combined_wh_per_km", "estimated_range_km"?}
VehicleSpec vehicle_from_json(const nlohmann::json& j);

/// {"name", "power_kw", "soc_trigger", "min_duration_minutes",
///  "window": "any" | {"days": ["Mon", ...], "start": "HH:MM", "end": "HH:MM"}}
ChargingPolicy policy_from_json(const nlohmann::json& j);
nlohmann::ordered_json policy_to_json(const ChargingPolicy& policy);
nlohmann::ordered_json vehicle_to_json(const VehicleSpec& spec);

/// A built-in name or a full object.
VehicleSpec resolve_vehicle(const nlohmann::json& entry);
/// 1..4, "1".."4", "scenarioN", or a full object.
ChargingPolicy resolve_policy(const nlohmann::json& entry);

struct RunConfig {
    std::vector<std::string> inputs;
    std::string output_dir;
    std::vector<VehicleSpec> vehicles;     ///< default: the four built-ins
    std::vector<ChargingPolicy> policies;  ///< default: scenarios 1-4
    double initial_soc_fraction = 1.0;
    std::optional<double> observation_days;  ///< default: span of the cleaned data
    std::size_t bins = 20;
    bool trace = false;
    unsigned jobs = 0;  ///< 0 = available cores

    /// Normalized form, recorded in run manifests.
    nlohmann::ordered_json snapshot() const;
};

/// Parses and fully resolves a run configuration. Unknown keys, unknown
/// vehicles/scenarios, duplicate names and out-of-range values are rejected
/// here, before any input is read.
RunConfig run_config_from_json(std::string_view json_text);
RunConfig run_config_from_value(const nlohmann::json& j);

}  // namespace evr
