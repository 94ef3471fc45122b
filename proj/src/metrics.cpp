// Copyright 2026 The evreplay Authors
// SPDX-License-Identifier: Apache-2.0

#include "evreplay/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <utility>

#include "evreplay/error.hpp"

namespace evr {

std::optional<UserMetrics> user_metrics(const SimulationResult& result, double observation_days) {
    if (!(observation_days > 0.0)) {
        throw Error(ErrorKind::Usage, "observation window must be > 0 days");
    }
    if (result.trips.empty()) {
        return std::nullopt;
    }
    UserMetrics m;
    m.user_id = result.user_id;
    m.vehicle = result.vehicle;
    m.policy = result.policy;
    m.trips = result.trips.size();
    m.charge_events = result.charges.size();
    double soc_pct_sum = 0.0;
    for (const auto& t : result.trips) {
        m.feasible_trips += t.feasible ? 1 : 0;
        soc_pct_sum += 100.0 * t.soc_after_kwh / result.capacity_kwh;
    }
    const auto n = static_cast<double>(m.trips);
    m.feasible_trip_pct = 100.0 * static_cast<double>(m.feasible_trips) / n;
    m.monthly_charges = static_cast<double>(m.charge_events) / (observation_days / kDaysPerMonth);
    m.avg_soc_after_trip_pct = std::clamp(soc_pct_sum / n, 0.0, 100.0);
    m.suitable = is_suitable(m.feasible_trip_pct);
    return m;
}

UserCharacterization characterize_user(std::string_view user_id,
                                       std::span<const TripRecord> trips) {
    if (trips.empty()) {
        throw Error(ErrorKind::Empty, "cannot characterize user '" + std::string(user_id) +
                                          "' without trips");
    }
    struct Day {
        std::size_t trips = 0;
        double km = 0.0;
        std::int64_t seconds = 0;
    };
    std::map<std::chrono::sys_days, Day> days;
    for (const auto& t : trips) {
        auto& d = days[date_of(t.start_ts)];
        ++d.trips;
        d.km += t.total_km();
        d.seconds += t.duration().count();
    }
    UserCharacterization c;
    c.user_id = std::string(user_id);
    c.trips = trips.size();
    c.active_days = days.size();
    double km = 0.0;
    double utilization = 0.0;
    for (const auto& [date, d] : days) {
        km += d.km;
        utilization += std::min(100.0, 100.0 * static_cast<double>(d.seconds) / 86400.0);
    }
    const auto n_days = static_cast<double>(c.active_days);
    c.avg_daily_trips = static_cast<double>(c.trips) / n_days;
    c.avg_daily_distance_km = km / n_days;
    c.utilization_pct = utilization / n_days;
    return c;
}

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) {
        throw Error(ErrorKind::Empty, "quantile of an empty sample");
    }
    const double pos = std::clamp(p, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

DistributionSummary aggregate(std::span<const double> values, std::size_t bins) {
    if (values.empty()) {
        throw Error(ErrorKind::Empty, "cannot aggregate an empty sample");
    }
    bins = std::max<std::size_t>(bins, 1);
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    DistributionSummary s;
    s.count = sorted.size();
    const auto n = static_cast<double>(s.count);
    // Summing the sorted copy keeps the result independent of input order.
    s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : sorted) {
        ss += (v - s.mean) * (v - s.mean);
    }
    s.std = std::sqrt(ss / n);
    s.min = sorted.front();
    s.max = sorted.back();
    s.q1 = quantile_sorted(sorted, 0.25);
    s.median = quantile_sorted(sorted, 0.5);
    s.q3 = quantile_sorted(sorted, 0.75);

    const double width = (s.max - s.min) / static_cast<double>(bins);
    s.histogram.resize(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        s.histogram[b].lower = s.min + width * static_cast<double>(b);
        s.histogram[b].upper = b + 1 == bins ? s.max : s.min + width * static_cast<double>(b + 1);
    }
    for (double v : sorted) {
        std::size_t b = 0;
        if (width > 0.0) {
            b = std::min(bins - 1, static_cast<std::size_t>((v - s.min) / width));
        }
        ++s.histogram[b].count;
    }
    std::size_t running = 0;
    for (auto& bin : s.histogram) {
        running += bin.count;
        bin.mass = static_cast<double>(bin.count) / n;
        bin.cdf = static_cast<double>(running) / n;
    }
    return s;
}

std::vector<MatrixCell> scenario_vehicle_matrix(std::span<const UserMetrics> metrics,
                                                std::span<const std::string> policies,
                                                std::span<const std::string> vehicles) {
    struct Acc {
        std::vector<double> feasible, soc, charges;
        std::size_t suitable = 0;
    };
    std::map<std::pair<std::string, std::string>, Acc> cells;
    for (const auto& m : metrics) {
        auto& acc = cells[{m.policy, m.vehicle}];
        acc.feasible.push_back(m.feasible_trip_pct);
        acc.soc.push_back(m.avg_soc_after_trip_pct);
        acc.charges.push_back(m.monthly_charges);
        acc.suitable += m.suitable ? 1 : 0;
    }
    // Means over sorted values so the result does not depend on user order.
    auto mean = [](std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };
    std::vector<MatrixCell> out;
    out.reserve(policies.size() * vehicles.size());
    for (const auto& policy : policies) {
        for (const auto& vehicle : vehicles) {
            auto it = cells.find({policy, vehicle});
            if (it == cells.end() || it->second.feasible.empty()) {
                throw Error(ErrorKind::Data, "no results for policy '" + policy +
                                                 "' and vehicle '" + vehicle + "'");
            }
            auto& acc = it->second;
            MatrixCell cell;
            cell.policy = policy;
            cell.vehicle = vehicle;
            cell.users = acc.feasible.size();
            cell.mean_feasible_trip_pct = mean(acc.feasible);
            cell.mean_avg_soc_after_trip_pct = mean(acc.soc);
            cell.mean_monthly_charges = mean(acc.charges);
            cell.suitable_share_pct =
                100.0 * static_cast<double>(acc.suitable) / static_cast<double>(cell.users);
            out.push_back(std::move(cell));
        }
    }
    return out;
}

void append_csv_number(std::string& out, double value) {
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    out.append(buf, end);
}

namespace {

// Names with commas or quotes are quoted per RFC 4180.
void append_field(std::string& out, std::string_view text) {
    if (text.find_first_of(",\"\n") == std::string_view::npos) {
        out.append(text);
        return;
    }
    out.push_back('"');
    for (char c : text) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
}

}  // namespace

void append_user_metrics_row(std::string& out, const UserMetrics& m) {
    append_field(out, m.user_id);
    out.push_back(',');
    append_field(out, m.vehicle);
    out.push_back(',');
    append_field(out, m.policy);
    out.push_back(',');
    append_csv_number(out, m.feasible_trip_pct);
    out.push_back(',');
    append_csv_number(out, m.monthly_charges);
    out.push_back(',');
    append_csv_number(out, m.avg_soc_after_trip_pct);
    out.append(m.suitable ? ",true\n" : ",false\n");
}

void append_matrix_row(std::string& out, const MatrixCell& cell) {
    append_field(out, cell.policy);
    out.push_back(',');
    append_field(out, cell.vehicle);
    out.push_back(',');
    out.append(std::to_string(cell.users));
    out.push_back(',');
    append_csv_number(out, cell.mean_feasible_trip_pct);
    out.push_back(',');
    append_csv_number(out, cell.mean_avg_soc_after_trip_pct);
    out.push_back(',');
    append_csv_number(out, cell.mean_monthly_charges);
    out.push_back(',');
    append_csv_number(out, cell.suitable_share_pct);
    out.push_back('\n');
}

void append_characterization_row(std::string& out, const UserCharacterization& c) {
    append_field(out, c.user_id);
    out.push_back(',');
    out.append(std::to_string(c.trips));
    out.push_back(',');
    out.append(std::to_string(c.active_days));
    out.push_back(',');
    append_csv_number(out, c.avg_daily_trips);
    out.push_back(',');
    append_csv_number(out, c.avg_daily_distance_km);
    out.push_back(',');
    append_csv_number(out, c.utilization_pct);
    out.push_back('\n');
}

void append_summary_row(std::string& out, std::string_view metric, std::string_view policy,
                        std::string_view vehicle, const DistributionSummary& s) {
    append_field(out, metric);
    out.push_back(',');
    append_field(out, policy);
    out.push_back(',');
    append_field(out, vehicle);
    append_summary_stats(out, s);
    out.push_back('\n');
}

void append_summary_stats(std::string& out, const DistributionSummary& s) {
    out.push_back(',');
    out.append(std::to_string(s.count));
    for (double v : {s.mean, s.std, s.min, s.q1, s.median, s.q3, s.max}) {
        out.push_back(',');
        append_csv_number(out, v);
    }
}

std::string histogram_csv(const DistributionSummary& s) {
    std::string out(kHistogramHeader);
    out.push_back('\n');
    for (std::size_t b = 0; b < s.histogram.size(); ++b) {
        const auto& bin = s.histogram[b];
        out.append(std::to_string(b));
        out.push_back(',');
        append_csv_number(out, bin.lower);
        out.push_back(',');
        append_csv_number(out, bin.upper);
        out.push_back(',');
        out.append(std::to_string(bin.count));
        out.push_back(',');
        append_csv_number(out, bin.mass);
        out.push_back(',');
        append_csv_number(out, bin.cdf);
        out.push_back('\n');
    }
    return out;
}

}  // namespace evr
