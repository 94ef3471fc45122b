// Copyright 2026 The evreplay Authors
// SPDX-License-Identifier: Apache-2.0

#include "evreplay/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>

#include "evreplay/error.hpp"

namespace evr {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void usage(const std::string& what) {
    throw Error(ErrorKind::Usage, what);
}

void reject_unknown_keys(const json& j, std::initializer_list<std::string_view> known,
                         std::string_view where) {
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            usage("unknown field '" + key + "' in " + std::string(where));
        }
    }
}

template <class T>
T required(const json& j, const char* key, std::string_view where) {
    const auto it = j.find(key);
    if (it == j.end()) {
        usage(std::string(where) + ": missing field '" + key + "'");
    }
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        usage(std::string(where) + ": field '" + key + "' has the wrong type");
    }
}

template <class T>
T optional_field(const json& j, const char* key, T fallback, std::string_view where) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
        return fallback;
    }
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        usage(std::string(where) + ": field '" + key + "' has the wrong type");
    }
}

std::chrono::minutes parse_hhmm(const std::string& text, std::string_view where) {
    if (text.size() != 5 || text[2] != ':' || !std::isdigit(static_cast<unsigned char>(text[0])) ||
        !std::isdigit(static_cast<unsigned char>(text[1])) ||
        !std::isdigit(static_cast<unsigned char>(text[3])) ||
        !std::isdigit(static_cast<unsigned char>(text[4]))) {
        usage(std::string(where) + ": time '" + text + "' is not HH:MM");
    }
    const int h = (text[0] - '0') * 10 + (text[1] - '0');
    const int m = (text[3] - '0') * 10 + (text[4] - '0');
    if (h > 23 || m > 59) {
        usage(std::string(where) + ": time '" + text + "' out of range");
    }
    return std::chrono::minutes{h * 60 + m};
}

std::string format_hhmm(std::chrono::minutes m) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%02d:%02d", static_cast<int>(m.count() / 60),
                  static_cast<int>(m.count() % 60));
    return buf;
}

}  // namespace

VehicleSpec vehicle_from_json(const json& j) {
    if (!j.is_object()) {
        usage("vehicle entry must be a name or an object");
    }
    reject_unknown_keys(j,
                        {"name", "usable_capacity_kwh", "rate_urban_wh_per_km",
                         "rate_highway_wh_per_km", "rate_combined_wh_per_km", "estimated_range_km"},
                        "vehicle");
    VehicleSpec spec;
    spec.name = required<std::string>(j, "name", "vehicle");
    const std::string where = "vehicle '" + spec.name + "'";
    spec.usable_capacity_kwh = required<double>(j, "usable_capacity_kwh", where);
    spec.rate_urban_wh_per_km = required<double>(j, "rate_urban_wh_per_km", where);
    spec.rate_highway_wh_per_km = required<double>(j, "rate_highway_wh_per_km", where);
    spec.rate_combined_wh_per_km = required<double>(j, "rate_combined_wh_per_km", where);
    spec.estimated_range_km = optional_field<double>(j, "estimated_range_km", 0.0, where);
    spec.validate();
    return spec;
}

ChargingPolicy policy_from_json(const json& j) {
    if (!j.is_object()) {
        usage("policy entry must be a scenario number or an object");
    }
    reject_unknown_keys(j, {"name", "power_kw", "soc_trigger", "min_duration_minutes", "window"},
                        "policy");
    ChargingPolicy p;
    p.name = required<std::string>(j, "name", "policy");
    const std::string where = "policy '" + p.name + "'";
    if (p.name.empty()) {
        usage("policy name must not be empty");
    }
    p.power_kw = required<double>(j, "power_kw", where);
    p.soc_trigger = required<double>(j, "soc_trigger", where);
    const double minutes = required<double>(j, "min_duration_minutes", where);
    if (!(minutes > 0.0) || !std::isfinite(minutes)) {
        usage(where + ": min_duration_minutes must be > 0");
    }
    p.min_duration = Seconds{std::llround(minutes * 60.0)};

    const auto it = j.find("window");
    if (it == j.end() || (it->is_string() && it->get<std::string>() == "any")) {
        p.window = AnyTime{};
    } else if (it->is_object()) {
        reject_unknown_keys(*it, {"days", "start", "end"}, where + " window");
        WeeklyWindow w;
        const auto days = required<std::vector<std::string>>(*it, "days", where + " window");
        for (const auto& d : days) {
            const auto wd = parse_weekday(d);
            if (!wd) {
                usage(where + ": unknown weekday '" + d + "'");
            }
            w.days.insert(*wd);
        }
        w.start = parse_hhmm(required<std::string>(*it, "start", where + " window"), where);
        w.end = parse_hhmm(required<std::string>(*it, "end", where + " window"), where);
        p.window = w;
    } else {
        usage(where + ": window must be \"any\" or {days, start, end}");
    }
    p.validate();
    return p;
}

ordered_json policy_to_json(const ChargingPolicy& p) {
    ordered_json j;
    j["name"] = p.name;
    j["power_kw"] = p.power_kw;
    j["soc_trigger"] = p.soc_trigger;
    j["min_duration_minutes"] = static_cast<double>(p.min_duration.count()) / 60.0;
    if (const auto* w = std::get_if<WeeklyWindow>(&p.window)) {
        ordered_json days = ordered_json::array();
        for (unsigned d : {1u, 2u, 3u, 4u, 5u, 6u, 0u}) {
            if (w->days.contains(std::chrono::weekday{d})) {
                days.push_back(std::string(weekday_name(std::chrono::weekday{d})));
            }
        }
        j["window"] = {{"days", days}, {"start", format_hhmm(w->start)}, {"end", format_hhmm(w->end)}};
    } else {
        j["window"] = "any";
    }
    return j;
}

ordered_json vehicle_to_json(const VehicleSpec& s) {
    ordered_json j;
    j["name"] = s.name;
    j["usable_capacity_kwh"] = s.usable_capacity_kwh;
    j["rate_urban_wh_per_km"] = s.rate_urban_wh_per_km;
    j["rate_highway_wh_per_km"] = s.rate_highway_wh_per_km;
    j["rate_combined_wh_per_km"] = s.rate_combined_wh_per_km;
    j["estimated_range_km"] = s.estimated_range_km;
    return j;
}

VehicleSpec resolve_vehicle(const json& entry) {
    if (entry.is_string()) {
        const auto name = entry.get<std::string>();
        if (const auto* spec = find_builtin_vehicle(name)) {
            return *spec;
        }
        usage("unknown vehicle '" + name + "'");
    }
    return vehicle_from_json(entry);
}

ChargingPolicy resolve_policy(const json& entry) {
    if (entry.is_number_integer()) {
        return scenario(entry.get<int>());
    }
    if (entry.is_string()) {
        std::string name = entry.get<std::string>();
        std::string digits = name;
        if (name.starts_with("scenario")) {
            digits = name.substr(8);
        } else if (name.size() == 2 && (name[0] == 'S' || name[0] == 's')) {
            digits = name.substr(1);
        }
        if (digits.size() == 1 && digits[0] >= '1' && digits[0] <= '4') {
            return scenario(digits[0] - '0');
        }
        usage("unknown scenario '" + name + "' (expected 1..4)");
    }
    return policy_from_json(entry);
}

ordered_json RunConfig::snapshot() const {
    ordered_json j;
    j["input"] = inputs;
    j["output"] = output_dir;
    j["vehicles"] = ordered_json::array();
    for (const auto& v : vehicles) {
        j["vehicles"].push_back(vehicle_to_json(v));
    }
    j["policies"] = ordered_json::array();
    for (const auto& p : policies) {
        j["policies"].push_back(policy_to_json(p));
    }
    j["initial_soc"] = initial_soc_fraction;
    j["observation_days"] = observation_days ? ordered_json(*observation_days) : ordered_json(nullptr);
    j["bins"] = bins;
    j["trace"] = trace;
    j["jobs"] = jobs;
    return j;
}

RunConfig run_config_from_json(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        usage(std::string("config is not valid JSON: ") + e.what());
    }
    return run_config_from_value(j);
}

RunConfig run_config_from_value(const json& j) {
    if (!j.is_object()) {
        usage("config must be a JSON object");
    }
    reject_unknown_keys(j,
                        {"input", "output", "vehicles", "policies", "initial_soc",
                         "observation_days", "bins", "trace", "jobs"},
                        "config");
    RunConfig cfg;
    if (const auto it = j.find("input"); it != j.end()) {
        if (it->is_string()) {
            cfg.inputs.push_back(it->get<std::string>());
        } else {
            cfg.inputs = optional_field<std::vector<std::string>>(j, "input", {}, "config");
        }
    }
    cfg.output_dir = optional_field<std::string>(j, "output", "", "config");

    if (const auto it = j.find("vehicles"); it != j.end() && !it->is_null()) {
        if (!it->is_array()) {
            usage("config: 'vehicles' must be an array");
        }
        for (const auto& entry : *it) {
            cfg.vehicles.push_back(resolve_vehicle(entry));
        }
    } else {
        const auto builtins = builtin_vehicles();
        cfg.vehicles.assign(builtins.begin(), builtins.end());
    }
    if (const auto it = j.find("policies"); it != j.end() && !it->is_null()) {
        if (!it->is_array()) {
            usage("config: 'policies' must be an array");
        }
        for (const auto& entry : *it) {
            cfg.policies.push_back(resolve_policy(entry));
        }
    } else {
        for (int n = 1; n <= 4; ++n) {
            cfg.policies.push_back(scenario(n));
        }
    }
    if (cfg.vehicles.empty() || cfg.policies.empty()) {
        usage("config: at least one vehicle and one policy are required");
    }
    std::set<std::string> seen;
    for (const auto& v : cfg.vehicles) {
        if (!seen.insert(v.name).second) {
            usage("config: duplicate vehicle '" + v.name + "'");
        }
    }
    seen.clear();
    for (const auto& p : cfg.policies) {
        if (!seen.insert(p.name).second) {
            usage("config: duplicate policy '" + p.name + "'");
        }
    }

    cfg.initial_soc_fraction = optional_field<double>(j, "initial_soc", 1.0, "config");
    if (!(cfg.initial_soc_fraction >= 0.0 && cfg.initial_soc_fraction <= 1.0)) {
        usage("config: initial_soc must be in [0, 1]");
    }
    if (const auto it = j.find("observation_days"); it != j.end() && !it->is_null()) {
        const double days = optional_field<double>(j, "observation_days", 0.0, "config");
        if (!(days > 0.0) || !std::isfinite(days)) {
            usage("config: observation_days must be > 0");
        }
        cfg.observation_days = days;
    }
    const auto bins = optional_field<std::int64_t>(j, "bins", 20, "config");
    if (bins < 1 || bins > 100000) {
        usage("config: bins must be in [1, 100000]");
    }
    cfg.bins = static_cast<std::size_t>(bins);
    cfg.trace = optional_field<bool>(j, "trace", false, "config");
    const auto jobs = optional_field<std::int64_t>(j, "jobs", 0, "config");
    if (jobs < 0 || jobs > 4096) {
        usage("config: jobs must be in [0, 4096]");
    }
    cfg.jobs = static_cast<unsigned>(jobs);
    return cfg;
}

}  // namespace evr
