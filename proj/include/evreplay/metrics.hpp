// Copyright 2026 The evreplay Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evreplay/ingest.hpp"
#include "evreplay/sim.hpp"

namespace evr {

/// Mean Gregorian month, 365.25 / 12 = 30.4375 days (30.44 to two decimals).
inline constexpr double kDaysPerMonth = 365.25 / 12.0;
inline constexpr double kSuitableFeasiblePct = 99.0;

struct UserMetrics {
    std::string user_id;
    std::string vehicle;
    std::string policy;
    std::size_t trips = 0;
    std::size_t feasible_trips = 0;
    std::size_t charge_events = 0;
    double feasible_trip_pct = 0.0;
    double monthly_charges = 0.0;
    double avg_soc_after_trip_pct = 0.0;  ///< over all trips; infeasible ones count as 0
    bool suitable = false;                ///< feasible_trip_pct >= 99
};

/// nullopt when the result has no trips. Throws Error(Usage) when
/// observation_days <= 0.
std::optional<UserMetrics> user_metrics(const SimulationResult& result, double observation_days);

inline bool is_suitable(double feasible_trip_pct) {
    return feasible_trip_pct >= kSuitableFeasiblePct;
}

/// Statistics over active days (calendar days on which at least one trip
/// starts). A trip is attributed entirely to its start date.
struct UserCharacterization {
    std::string user_id;
    std::size_t trips = 0;
    std::size_t active_days = 0;
    double avg_daily_trips = 0.0;
    double avg_daily_distance_km = 0.0;
    double utilization_pct = 0.0;  ///< mean daily driving time / 24 h, capped at 100
};

/// Requires at least one trip (throws Error(Empty) otherwise).
UserCharacterization characterize_user(std::string_view user_id,
                                       std::span<const TripRecord> trips);

struct HistogramBin {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t count = 0;
    double mass = 0.0;  ///< count / n
    double cdf = 0.0;   ///< cumulative mass up to and including this bin
};

struct DistributionSummary {
    std::size_t count = 0;
    double mean = 0.0;
    double std = 0.0;  ///< population standard deviation
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    std::vector<HistogramBin> histogram;
};

/// Quantile of ascending-sorted values, linear interpolation between the
/// closest order statistics at position p * (n - 1).
double quantile_sorted(std::span<const double> sorted, double p);

/// Requires at least one value (throws Error(Empty) otherwise). The
/// histogram has `bins` equal-width bins over [min, max]; the last bin is
/// closed on the right. When min == max every value falls in the first bin.
DistributionSummary aggregate(std::span<const double> values, std::size_t bins = 20);

struct MatrixCell {
    std::string policy;
    std::string vehicle;
    std::size_t users = 0;
    double mean_feasible_trip_pct = 0.0;
    double mean_avg_soc_after_trip_pct = 0.0;
    double mean_monthly_charges = 0.0;
    double suitable_share_pct = 0.0;
};

/// One row per (policy, vehicle), policies outermost, in the given orders.
/// Throws Error(Data) when a combination has no per-user metrics.
std::vector<MatrixCell> scenario_vehicle_matrix(std::span<const UserMetrics> metrics,
                                                std::span<const std::string> policies,
                                                std::span<const std::string> vehicles);

inline constexpr std::string_view kUserMetricsHeader =
    "user_id,vehicle,policy,feasible_trip_pct,monthly_charges,avg_soc_after_trip_pct,suitable";
inline constexpr std::string_view kMatrixHeader =
    "policy,vehicle,users,mean_feasible_trip_pct,mean_avg_soc_after_trip_pct,"
    "mean_monthly_charges,suitable_share_pct";
inline constexpr std::string_view kSummaryHeader =
    "metric,policy,vehicle,count,mean,std,min,q1,median,q3,max";
inline constexpr std::string_view kCharacterizationSummaryHeader =
    "metric,count,mean,std,min,q1,median,q3,max";
inline constexpr std::string_view kHistogramHeader = "bin,lower,upper,count,mass,cdf";
inline constexpr std::string_view kCharacterizationHeader =
    "user_id,trips,active_days,avg_daily_trips,avg_daily_distance_km,utilization_pct";

void append_csv_number(std::string& out, double value);
void append_user_metrics_row(std::string& out, const UserMetrics& m);
void append_matrix_row(std::string& out, const MatrixCell& cell);
void append_characterization_row(std::string& out, const UserCharacterization& c);
/// ",count,mean,std,min,q1,median,q3,max" without a trailing newline.
void append_summary_stats(std::string& out, const DistributionSummary& s);
void append_summary_row(std::string& out, std::string_view metric, std::string_view policy,
                        std::string_view vehicle, const DistributionSummary& s);
std::string histogram_csv(const DistributionSummary& s);

}  // namespace evr
