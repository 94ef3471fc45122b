/* Copyright 2026 The evreplay Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the evreplay library. All objects are opaque handles owned
 * by the caller and released with the matching *_destroy function. Every
 * fallible call returns an evr_status; the message for the most recent
 * failure on a context is available from evr_context_last_error.
 */
#ifndef EVREPLAY_EVREPLAY_H
#define EVREPLAY_EVREPLAY_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(EVR_BUILDING_LIBRARY)
#    define EVR_API __declspec(dllexport)
#  else
#    define EVR_API __declspec(dllimport)
#  endif
#else
#  define EVR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as process exit codes. */
typedef enum evr_status {
    EVR_OK = 0,
    EVR_EMPTY = 1,    /* empty or degenerate result */
    EVR_USAGE = 2,    /* bad argument or configuration */
    EVR_IO = 3,       /* file or stream failure */
    EVR_DATA = 4,     /* inconsistent input data */
    EVR_INTERNAL = 5  /* unexpected failure */
} evr_status;

typedef struct evr_context evr_context;
typedef struct evr_vehicle evr_vehicle;
typedef struct evr_policy evr_policy;
typedef struct evr_timeline evr_timeline;
typedef struct evr_result evr_result;

EVR_API const char* evr_version(void);
EVR_API const char* evr_status_string(evr_status status);

/* ---- context ------------------------------------------------------------ */

EVR_API evr_status evr_context_create(evr_context** out);
EVR_API void evr_context_destroy(evr_context* ctx);
/* Empty string when the last call succeeded. Valid until the next call. */
EVR_API const char* evr_context_last_error(const evr_context* ctx);
/* 0 selects the number of available cores. */
EVR_API evr_status evr_context_set_jobs(evr_context* ctx, unsigned jobs);

/* ---- vehicles ----------------------------------------------------------- */

typedef struct evr_vehicle_info {
    const char* name; /* owned by the vehicle handle */
    double usable_capacity_kwh;
    double rate_urban_wh_per_km;
    double rate_extraurban_wh_per_km;
    double rate_highway_wh_per_km;
    double rate_combined_wh_per_km;
    double estimated_range_km;
} evr_vehicle_info;

EVR_API size_t evr_builtin_vehicle_count(void);
EVR_API evr_status evr_builtin_vehicle(evr_context* ctx, size_t index, evr_vehicle** out);
EVR_API evr_status evr_vehicle_find(evr_context* ctx, const char* name, evr_vehicle** out);
EVR_API evr_status evr_vehicle_create(evr_context* ctx, const char* name, double capacity_kwh,
                                      double urban_wh_per_km, double highway_wh_per_km,
                                      double combined_wh_per_km, evr_vehicle** out);
EVR_API void evr_vehicle_destroy(evr_vehicle* vehicle);
EVR_API evr_status evr_vehicle_get_info(const evr_vehicle* vehicle, evr_vehicle_info* out);
EVR_API evr_status evr_trip_energy(const evr_vehicle* vehicle, double km_urban,
                                   double km_extraurban, double km_highway, double* out_kwh);

/* ---- charging policies -------------------------------------------------- */

typedef struct evr_policy_info {
    const char* name; /* owned by the policy handle */
    double power_kw;
    double soc_trigger;
    int64_t min_duration_s;
    int windowed;           /* 0: any time */
    unsigned weekday_mask;  /* bit d set for weekday d, Sunday = 0 */
    int window_start_min;   /* minutes after midnight */
    int window_end_min;     /* end < start crosses midnight */
} evr_policy_info;

/* Reference scenarios 1..4. */
EVR_API evr_status evr_policy_scenario(evr_context* ctx, int n, evr_policy** out);
/* Object with name, power_kw, soc_trigger, min_duration_minutes, window. */
EVR_API evr_status evr_policy_from_json(evr_context* ctx, const char* json, evr_policy** out);
EVR_API void evr_policy_destroy(evr_policy* policy);
EVR_API evr_status evr_policy_get_info(const evr_policy* policy, evr_policy_info* out);
/* Timestamps are "YYYY-MM-DDTHH:MM:SS". *out_charges is 0 when no session
 * starts; otherwise the interval is written to the two buffers (20 bytes
 * each, including the terminator). */
EVR_API evr_status evr_charge_decision(evr_context* ctx, const evr_policy* policy,
                                       const char* parking_start, const char* parking_end,
                                       double soc_fraction, int* out_charges,
                                       char* begin_buf, char* end_buf);

/* ---- timelines and simulation ------------------------------------------- */

/* Parses and cleans a trip log held in memory (CSV text with header). */
EVR_API evr_status evr_timeline_load(evr_context* ctx, const char* csv, size_t length,
                                     evr_timeline** out);
EVR_API void evr_timeline_destroy(evr_timeline* timeline);
EVR_API size_t evr_timeline_user_count(const evr_timeline* timeline);
/* Pointer owned by the timeline. NULL when out of range. */
EVR_API const char* evr_timeline_user_id(const evr_timeline* timeline, size_t user);
EVR_API size_t evr_timeline_trip_count(const evr_timeline* timeline, size_t user);

EVR_API evr_status evr_simulate(evr_context* ctx, const evr_timeline* timeline, size_t user,
                                const evr_vehicle* vehicle, const evr_policy* policy,
                                double initial_soc_fraction, evr_result** out);
EVR_API void evr_result_destroy(evr_result* result);

typedef struct evr_trip_outcome {
    double energy_required_kwh;
    double soc_before_kwh;
    double soc_after_kwh;
    int feasible;
} evr_trip_outcome;

EVR_API size_t evr_result_trip_count(const evr_result* result);
EVR_API evr_status evr_result_trip(const evr_result* result, size_t index,
                                   evr_trip_outcome* out);
EVR_API size_t evr_result_charge_count(const evr_result* result);
EVR_API double evr_result_final_soc(const evr_result* result);
EVR_API double evr_result_conservation_residual(const evr_result* result);

/* ---- pipeline commands -------------------------------------------------- */

/* Profile JSON: a preset name in "preset" plus overrides. */
EVR_API evr_status evr_run_synth(evr_context* ctx, const char* profile_json,
                                 const char* output_dir);
EVR_API evr_status evr_run_clean(evr_context* ctx, const char* const* inputs, size_t n_inputs,
                                 const char* output_dir);
EVR_API evr_status evr_run_characterize(evr_context* ctx, const char* const* inputs,
                                        size_t n_inputs, const char* output_dir, size_t bins);
/* Run configuration JSON: input, output, vehicles, policies, initial_soc,
 * observation_days, bins, trace, jobs. */
EVR_API evr_status evr_run_simulate(evr_context* ctx, const char* config_json);

/* Profile JSON for a preset; release with evr_string_free. */
EVR_API evr_status evr_preset_profile_json(evr_context* ctx, const char* name, char** out);
EVR_API void evr_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* EVREPLAY_EVREPLAY_H */
