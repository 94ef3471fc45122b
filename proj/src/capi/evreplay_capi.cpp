// Copyright 2026 The evreplay Authors
// SPDX-License-Identifier: Apache-2.0

#include "evreplay/evreplay.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "evreplay/app.hpp"
#include "evreplay/charging.hpp"
#include "evreplay/config.hpp"
#include "evreplay/energy.hpp"
#include "evreplay/error.hpp"
#include "evreplay/ingest.hpp"
#include "evreplay/sim.hpp"
#include "evreplay/synthgen.hpp"

struct evr_context {
    std::string last_error;
    unsigned jobs = 0;
};

struct evr_vehicle {
    evr::VehicleSpec spec;
};

struct evr_policy {
    evr::ChargingPolicy policy;
};

struct evr_timeline {
    std::vector<evr::UserTimeline> users;
};

struct evr_result {
    evr::SimulationResult result;
};

namespace {

evr_status status_of(evr::ErrorKind kind) {
    switch (kind) {
    case evr::ErrorKind::Empty: return EVR_EMPTY;
    case evr::ErrorKind::Usage: return EVR_USAGE;
    case evr::ErrorKind::Io: return EVR_IO;
    case evr::ErrorKind::Data: return EVR_DATA;
    }
    return EVR_INTERNAL;
}

// Runs `body`, translating exceptions into a status and recording the message.
template <class Body>
evr_status guarded(evr_context* ctx, Body&& body) noexcept {
    evr_status status = EVR_OK;
    std::string message;
    try {
        body();
    } catch (const evr::Error& e) {
        status = status_of(e.kind());
        message = e.what();
    } catch (const std::bad_alloc&) {
        status = EVR_INTERNAL;
        message = "out of memory";
    } catch (const std::exception& e) {
        status = EVR_INTERNAL;
        message = e.what();
    } catch (...) {
        status = EVR_INTERNAL;
        message = "unknown failure";
    }
    if (ctx != nullptr) {
        try {
            ctx->last_error = std::move(message);
        } catch (...) {
        }
    }
    return status;
}

void require(bool condition, const char* what) {
    if (!condition) {
        throw evr::Error(evr::ErrorKind::Usage, what);
    }
}

std::vector<std::string> input_list(const char* const* inputs, std::size_t n) {
    require(inputs != nullptr || n == 0, "inputs must not be null");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        require(inputs[i] != nullptr, "input path must not be null");
        out.emplace_back(inputs[i]);
    }
    return out;
}

evr::Timestamp timestamp_arg(const char* text) {
    require(text != nullptr, "timestamp must not be null");
    const auto ts = evr::parse_timestamp(text);
    if (!ts) {
        throw evr::Error(evr::ErrorKind::Usage,
                         std::string("bad timestamp '") + text + "', expected YYYY-MM-DDTHH:MM:SS");
    }
    return *ts;
}

}  // namespace

extern "C" {

const char* evr_version(void) {
    return "0.1.0";
}

const char* evr_status_string(evr_status status) {
    switch (status) {
    case EVR_OK: return "ok";
    case EVR_EMPTY: return "empty result";
    case EVR_USAGE: return "usage error";
    case EVR_IO: return "i/o error";
    case EVR_DATA: return "data error";
    case EVR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

evr_status evr_context_create(evr_context** out) {
    if (out == nullptr) {
        return EVR_USAGE;
    }
    *out = new (std::nothrow) evr_context;
    return *out != nullptr ? EVR_OK : EVR_INTERNAL;
}

void evr_context_destroy(evr_context* ctx) {
    delete ctx;
}

const char* evr_context_last_error(const evr_context* ctx) {
    return ctx != nullptr ? ctx->last_error.c_str() : "null context";
}

evr_status evr_context_set_jobs(evr_context* ctx, unsigned jobs) {
    return guarded(ctx, [&] {
        require(ctx != nullptr, "context must not be null");
        ctx->jobs = jobs;
    });
}

size_t evr_builtin_vehicle_count(void) {
    return evr::builtin_vehicles().size();
}

evr_status evr_builtin_vehicle(evr_context* ctx, size_t index, evr_vehicle** out) {
    return guarded(ctx, [&] {
        require(out != nullptr, "output handle must not be null");
        const auto builtins = evr::builtin_vehicles();
        require(index < builtins.size(), "built-in vehicle index out of range");
        *out = new evr_vehicle{builtins[index]};
    });
}

evr_status evr_vehicle_find(evr_context* ctx, const char* name, evr_vehicle** out) {
    return guarded(ctx, [&] {
        require(name != nullptr && out != nullptr, "arguments must not be null");
        const auto* spec = evr::find_builtin_vehicle(name);
        if (spec == nullptr) {
            throw evr::Error(evr::ErrorKind::Usage, std::string("unknown vehicle '") + name + "'");
        }
        *out = new evr_vehicle{*spec};
    });
}

evr_status evr_vehicle_create(evr_context* ctx, const char* name, double capacity_kwh,
                              double urban_wh_per_km, double highway_wh_per_km,
                              double combined_wh_per_km, evr_vehicle** out) {
    return guarded(ctx, [&] {
        require(name != nullptr && out != nullptr, "arguments must not be null");
        evr::VehicleSpec spec;
        spec.name = name;
        spec.usable_capacity_kwh = capacity_kwh;
        spec.rate_urban_wh_per_km = urban_wh_per_km;
        spec.rate_highway_wh_per_km = highway_wh_per_km;
        spec.rate_combined_wh_per_km = combined_wh_per_km;
        spec.validate();
        *out = new evr_vehicle{std::move(spec)};
    });
}

void evr_vehicle_destroy(evr_vehicle* vehicle) {
    delete vehicle;
}

evr_status evr_vehicle_get_info(const evr_vehicle* vehicle, evr_vehicle_info* out) {
    if (vehicle == nullptr || out == nullptr) {
        return EVR_USAGE;
    }
    const auto& s = vehicle->spec;
    out->name = s.name.c_str();
    out->usable_capacity_kwh = s.usable_capacity_kwh;
    out->rate_urban_wh_per_km = s.rate_urban_wh_per_km;
    out->rate_extraurban_wh_per_km = s.rate_extraurban_wh_per_km();
    out->rate_highway_wh_per_km = s.rate_highway_wh_per_km;
    out->rate_combined_wh_per_km = s.rate_combined_wh_per_km;
    out->estimated_range_km = s.estimated_range_km;
    return EVR_OK;
}

evr_status evr_trip_energy(const evr_vehicle* vehicle, double km_urban, double km_extraurban,
                           double km_highway, double* out_kwh) {
    if (vehicle == nullptr || out_kwh == nullptr) {
        return EVR_USAGE;
    }
    if (!(km_urban >= 0.0 && km_extraurban >= 0.0 && km_highway >= 0.0)) {
        return EVR_USAGE;
    }
    *out_kwh = evr::trip_energy_kwh(vehicle->spec, km_urban, km_extraurban, km_highway);
    return EVR_OK;
}

evr_status evr_policy_scenario(evr_context* ctx, int n, evr_policy** out) {
    return guarded(ctx, [&] {
        require(out != nullptr, "output handle must not be null");
        *out = new evr_policy{evr::scenario(n)};
    });
}

evr_status evr_policy_from_json(evr_context* ctx, const char* json, evr_policy** out) {
    return guarded(ctx, [&] {
        require(json != nullptr && out != nullptr, "arguments must not be null");
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(json);
        } catch (const nlohmann::json::exception& e) {
            throw evr::Error(evr::ErrorKind::Usage, std::string("policy is not valid JSON: ") + e.what());
        }
        *out = new evr_policy{evr::resolve_policy(j)};
    });
}

void evr_policy_destroy(evr_policy* policy) {
    delete policy;
}

evr_status evr_policy_get_info(const evr_policy* policy, evr_policy_info* out) {
    if (policy == nullptr || out == nullptr) {
        return EVR_USAGE;
    }
    const auto& p = policy->policy;
    out->name = p.name.c_str();
    out->power_kw = p.power_kw;
    out->soc_trigger = p.soc_trigger;
    out->min_duration_s = p.min_duration.count();
    out->windowed = 0;
    out->weekday_mask = 0x7F;
    out->window_start_min = 0;
    out->window_end_min = 0;
    if (const auto* w = std::get_if<evr::WeeklyWindow>(&p.window)) {
        out->windowed = 1;
        out->weekday_mask = 0;
        for (unsigned d = 0; d < 7; ++d) {
            if (w->days.contains(std::chrono::weekday{d})) {
                out->weekday_mask |= 1u << d;
            }
        }
        out->window_start_min = static_cast<int>(w->start.count());
        out->window_end_min = static_cast<int>(w->end.count());
    }
    return EVR_OK;
}

evr_status evr_charge_decision(evr_context* ctx, const evr_policy* policy,
                               const char* parking_start, const char* parking_end,
                               double soc_fraction, int* out_charges, char* begin_buf,
                               char* end_buf) {
    return guarded(ctx, [&] {
        require(policy != nullptr && out_charges != nullptr, "arguments must not be null");
        evr::ParkingEvent parking;
        parking.start_ts = timestamp_arg(parking_start);
        parking.end_ts = timestamp_arg(parking_end);
        require(parking.end_ts > parking.start_ts, "parking end must be after its start");
        const auto decision = evr::charge_decision(policy->policy, parking, soc_fraction);
        *out_charges = decision ? 1 : 0;
        if (decision && begin_buf != nullptr) {
            const auto s = evr::format_timestamp(decision->begin_ts);
            std::memcpy(begin_buf, s.c_str(), s.size() + 1);
        }
        if (decision && end_buf != nullptr) {
            const auto s = evr::format_timestamp(decision->latest_end_ts);
            std::memcpy(end_buf, s.c_str(), s.size() + 1);
        }
    });
}

evr_status evr_timeline_load(evr_context* ctx, const char* csv, size_t length,
                             evr_timeline** out) {
    return guarded(ctx, [&] {
        require(csv != nullptr && out != nullptr, "arguments must not be null");
        const unsigned jobs = ctx != nullptr && ctx->jobs != 0 ? ctx->jobs : 1;
        auto cleaned = evr::clean_trip_log(evr::parse_trip_log(std::string_view(csv, length)), jobs);
        *out = new evr_timeline{std::move(cleaned.users)};
    });
}

void evr_timeline_destroy(evr_timeline* timeline) {
    delete timeline;
}

size_t evr_timeline_user_count(const evr_timeline* timeline) {
    return timeline != nullptr ? timeline->users.size() : 0;
}

const char* evr_timeline_user_id(const evr_timeline* timeline, size_t user) {
    if (timeline == nullptr || user >= timeline->users.size()) {
        return nullptr;
    }
    return timeline->users[user].user_id.c_str();
}

size_t evr_timeline_trip_count(const evr_timeline* timeline, size_t user) {
    if (timeline == nullptr || user >= timeline->users.size()) {
        return 0;
    }
    return timeline->users[user].trips.size();
}

evr_status evr_simulate(evr_context* ctx, const evr_timeline* timeline, size_t user,
                        const evr_vehicle* vehicle, const evr_policy* policy,
                        double initial_soc_fraction, evr_result** out) {
    return guarded(ctx, [&] {
        require(timeline != nullptr && vehicle != nullptr && policy != nullptr && out != nullptr,
                "arguments must not be null");
        require(user < timeline->users.size(), "user index out of range");
        require(initial_soc_fraction >= 0.0 && initial_soc_fraction <= 1.0,
                "initial SoC fraction must be in [0, 1]");
        *out = new evr_result{evr::simulate_user(timeline->users[user], vehicle->spec,
                                                 policy->policy, initial_soc_fraction)};
    });
}

void evr_result_destroy(evr_result* result) {
    delete result;
}

size_t evr_result_trip_count(const evr_result* result) {
    return result != nullptr ? result->result.trips.size() : 0;
}

evr_status evr_result_trip(const evr_result* result, size_t index, evr_trip_outcome* out) {
    if (result == nullptr || out == nullptr || index >= result->result.trips.size()) {
        return EVR_USAGE;
    }
    const auto& t = result->result.trips[index];
    out->energy_required_kwh = t.energy_required_kwh;
    out->soc_before_kwh = t.soc_before_kwh;
    out->soc_after_kwh = t.soc_after_kwh;
    out->feasible = t.feasible ? 1 : 0;
    return EVR_OK;
}

size_t evr_result_charge_count(const evr_result* result) {
    return result != nullptr ? result->result.charges.size() : 0;
}

double evr_result_final_soc(const evr_result* result) {
    return result != nullptr ? result->result.final_soc_kwh : 0.0;
}

double evr_result_conservation_residual(const evr_result* result) {
    return result != nullptr ? evr::conservation_residual(result->result) : 0.0;
}

evr_status evr_run_synth(evr_context* ctx, const char* profile_json, const char* output_dir) {
    return guarded(ctx, [&] {
        require(profile_json != nullptr && output_dir != nullptr, "arguments must not be null");
        evr::cmd_synth(evr::profile_from_json(profile_json), output_dir);
    });
}

evr_status evr_run_clean(evr_context* ctx, const char* const* inputs, size_t n_inputs,
                         const char* output_dir) {
    return guarded(ctx, [&] {
        require(output_dir != nullptr, "output directory must not be null");
        evr::cmd_clean(input_list(inputs, n_inputs), output_dir, ctx != nullptr ? ctx->jobs : 0);
    });
}

evr_status evr_run_characterize(evr_context* ctx, const char* const* inputs, size_t n_inputs,
                                const char* output_dir, size_t bins) {
    return guarded(ctx, [&] {
        require(output_dir != nullptr, "output directory must not be null");
        evr::cmd_characterize(input_list(inputs, n_inputs), output_dir, bins,
                              ctx != nullptr ? ctx->jobs : 0);
    });
}

evr_status evr_run_simulate(evr_context* ctx, const char* config_json) {
    return guarded(ctx, [&] {
        require(config_json != nullptr, "config must not be null");
        auto config = evr::run_config_from_json(std::string_view(config_json));
        if (config.jobs == 0 && ctx != nullptr) {
            config.jobs = ctx->jobs;
        }
        evr::cmd_simulate(config);
    });
}

evr_status evr_preset_profile_json(evr_context* ctx, const char* name, char** out) {
    return guarded(ctx, [&] {
        require(name != nullptr && out != nullptr, "arguments must not be null");
        const auto text = evr::profile_to_json(evr::preset_profile(name));
        char* buf = static_cast<char*>(std::malloc(text.size() + 1));
        if (buf == nullptr) {
            throw std::bad_alloc();
        }
        std::memcpy(buf, text.c_str(), text.size() + 1);
        *out = buf;
    });
}

void evr_string_free(char* text) {
    std::free(text);
}

}  // extern "C"
