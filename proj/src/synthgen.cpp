// Copyright 2026 The evreplay Authors
// SPDX-License-Identifier: Apache-2.0

#include "evreplay/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "evreplay/error.hpp"
#include "evreplay/random.hpp"

namespace evr {

namespace {

using namespace std::chrono_literals;
using nlohmann::json;

constexpr double kUrbanKmh = 28.0;
constexpr double kExtraUrbanKmh = 60.0;
constexpr double kHighwayKmh = 105.0;
constexpr Seconds kMinTripSeconds{90};
// Ordinary legs stay under 300 km so even an all-urban leg lasts < 11 h.
constexpr double kMaxLegKm = 300.0;

struct Leg {
    double urban = 0.0;
    double extraurban = 0.0;
    double highway = 0.0;

    double km() const { return urban + extraurban + highway; }
    Seconds duration() const {
        const double hours = urban / kUrbanKmh + extraurban / kExtraUrbanKmh + highway / kHighwayKmh;
        return std::max(kMinTripSeconds, Seconds{std::llround(hours * 3600.0)});
    }
};

struct UserTraits {
    double active_prob = 0.0;
    double trips_mean = 0.0;
    double km_median = 0.0;
    double highway = 0.0;
    double extraurban = 0.0;
    double departure = 0.0;
    bool commuter = false;
    double commute_km = 0.0;
};

double round_to_meters(double km) {
    return std::round(km * 1000.0) / 1000.0;
}

// Splits a trip over road categories around the given shares. `noise`
// scales the per-trip jitter of the shares.
Leg split_leg(double km, double highway_share, double extra_share, Xoshiro256StarStar& rng,
              double noise = 1.0) {
    double h = std::clamp(highway_share + noise * 0.15 * rng.normal(), 0.0, 0.95);
    if (km < 5.0) {
        h *= km / 5.0;
    }
    const double e = std::clamp(extra_share + noise * 0.12 * rng.normal(), 0.0, 1.0 - h);
    Leg leg;
    leg.highway = round_to_meters(km * h);
    leg.extraurban = round_to_meters(km * e);
    leg.urban = std::max(0.0, round_to_meters(km - leg.highway - leg.extraurban));
    return leg;
}

UserTraits draw_traits(const GeneratorProfile& p, Xoshiro256StarStar& rng) {
    UserTraits t;
    t.active_prob = rng.uniform(p.active_prob_min, p.active_prob_max);
    t.trips_mean = std::clamp(rng.lognormal(p.trips_per_day_median, p.trips_per_day_sigma), 1.0,
                              static_cast<double>(p.max_trips_per_day));
    t.km_median = rng.lognormal(p.daily_km_median, p.daily_km_user_sigma);
    t.highway = std::clamp(p.highway_share + 0.1 * rng.normal(), 0.0, 0.9);
    t.extraurban = std::clamp(p.extraurban_share + 0.1 * rng.normal(), 0.0, 1.0 - t.highway);
    t.departure = p.departure_hour + 0.5 * rng.normal();
    t.commuter = rng.bernoulli(p.commuter_share);
    t.commute_km = std::clamp(rng.lognormal(p.commute_km_median, 0.45), 2.0, 35.0);
    return t;
}

// Shrinks legs so their total stays within `cap`, keeping each >= min_km.
void apply_cap(std::vector<double>& kms, double cap, double min_km) {
    double total = 0.0;
    for (double k : kms) {
        total += k;
    }
    if (cap <= 0.0 || total <= cap) {
        return;
    }
    const double n = static_cast<double>(kms.size());
    const double excess_total = total - n * min_km;
    const double budget = cap - n * min_km;
    for (double& k : kms) {
        k = min_km + (excess_total > 0.0 ? budget * (k - min_km) / excess_total : 0.0);
    }
}

// Trips are placed from `start` with gaps >= min_gap; trailing legs are
// dropped when the day cannot hold them.
std::vector<std::pair<Seconds, Leg>> schedule(std::vector<Leg> legs, Seconds start,
                                              const GeneratorProfile& p,
                                              Xoshiro256StarStar& rng) {
    const auto day_end = Seconds{std::llround(p.day_end_hour * 3600.0)};
    const auto earliest = Seconds{std::llround(p.earliest_departure_hour * 3600.0)};
    const auto min_gap = Seconds{std::llround(p.min_gap_minutes * 60.0)};

    auto driving = [&] {
        Seconds sum{0};
        for (const auto& l : legs) {
            sum += l.duration();
        }
        return sum;
    };
    Seconds available = day_end - start - driving();
    while (legs.size() > 1 &&
           available < min_gap * static_cast<std::int64_t>(legs.size() - 1)) {
        legs.pop_back();
        available = day_end - start - driving();
    }
    if (available < Seconds{0}) {
        start = std::max(earliest, day_end - driving());
        available = day_end - start - driving();
    }
    std::vector<double> weights(legs.size() > 1 ? legs.size() - 1 : 0);
    double weight_sum = 0.0;
    for (double& w : weights) {
        w = rng.uniform(0.2, 1.8);
        weight_sum += w;
    }
    const double slack = std::max(0.0, static_cast<double>(
                                           (available - min_gap * static_cast<std::int64_t>(weights.size())).count())) *
                         rng.uniform(0.3, 0.9);

    std::vector<std::pair<Seconds, Leg>> out;
    out.reserve(legs.size());
    Seconds t = start;
    for (std::size_t i = 0; i < legs.size(); ++i) {
        out.emplace_back(t, legs[i]);
        t += legs[i].duration();
        if (i < weights.size()) {
            t += min_gap + Seconds{static_cast<std::int64_t>(std::floor(slack * weights[i] / weight_sum))};
        }
    }
    return out;
}

std::vector<std::pair<Seconds, Leg>> commute_day(const GeneratorProfile& p, const UserTraits& u,
                                                 Xoshiro256StarStar& rng) {
    const double jitter = rng.uniform(0.9, 1.1);
    double one_way = std::max(p.min_trip_km, u.commute_km * jitter);
    std::vector<double> errands;
    if (rng.bernoulli(0.4)) {
        const int n = rng.bernoulli(0.5) ? 2 : 1;
        for (int i = 0; i < n; ++i) {
            errands.push_back(std::max(p.min_trip_km, rng.uniform(2.0, 6.0)));
        }
    }
    if (p.daily_km_cap > 0.0) {
        double total = 2.0 * one_way;
        for (double e : errands) {
            total += e;
        }
        if (total > p.daily_km_cap) {
            errands.clear();
        }
        one_way = std::min(one_way, p.daily_km_cap / 2.0);
    }

    const double depart_h = std::clamp(7.5 + 0.4 * rng.normal(), std::max(6.5, p.earliest_departure_hour), 9.0);
    const double work_h = std::clamp(p.work_hours + 0.5 * rng.normal(), 4.0, 10.0);
    const Leg out_leg = split_leg(one_way, u.highway, u.extraurban, rng);
    const Leg back_leg = split_leg(one_way, u.highway, u.extraurban, rng);

    std::vector<std::pair<Seconds, Leg>> trips;
    Seconds t{std::llround(depart_h * 3600.0)};
    trips.emplace_back(t, out_leg);
    t += out_leg.duration() + Seconds{std::llround(work_h * 3600.0)};
    const auto day_end = Seconds{std::llround(p.day_end_hour * 3600.0)};
    if (t + back_leg.duration() > day_end) {
        t = day_end - back_leg.duration();
    }
    trips.emplace_back(t, back_leg);
    t += back_leg.duration();
    for (double km : errands) {
        const Leg leg = split_leg(km, 0.0, 0.2, rng);
        const Seconds gap{std::llround(rng.uniform(20.0, 60.0) * 60.0)};
        if (t + gap + leg.duration() > day_end) {
            break;
        }
        t += gap;
        trips.emplace_back(t, leg);
        t += leg.duration();
    }
    return trips;
}

std::vector<std::pair<Seconds, Leg>> general_day(const GeneratorProfile& p, const UserTraits& u,
                                                 bool force_long, Xoshiro256StarStar& rng) {
    const int n = std::clamp(static_cast<int>(std::lround(u.trips_mean * std::exp(0.3 * rng.normal()))),
                             1, p.max_trips_per_day);
    const double day_km = rng.lognormal(u.km_median, p.daily_km_day_sigma);

    std::vector<double> weights(static_cast<std::size_t>(n));
    double weight_sum = 0.0;
    for (double& w : weights) {
        w = rng.uniform(0.3, 1.7);
        weight_sum += w;
    }
    std::vector<double> kms;
    kms.reserve(weights.size());
    for (double w : weights) {
        kms.push_back(std::clamp(day_km * w / weight_sum, p.min_trip_km, kMaxLegKm));
    }
    apply_cap(kms, p.daily_km_cap, p.min_trip_km);

    std::vector<Leg> legs;
    legs.reserve(kms.size() + 1);
    if (force_long) {
        legs.push_back({0.0, 0.0, round_to_meters(p.forced_long_trip_km)});
    }
    for (double km : kms) {
        legs.push_back(split_leg(km, u.highway, u.extraurban, rng));
    }
    if (p.long_trip_prob > 0.0 && rng.bernoulli(p.long_trip_prob)) {
        const double km = rng.uniform(p.long_trip_km_min, p.long_trip_km_max);
        // never replaces the forced leg at the front
        const std::size_t first = force_long ? 1 : 0;
        const auto pick = static_cast<std::size_t>(rng.uniform() * static_cast<double>(legs.size() - first));
        legs[std::min(first + pick, legs.size() - 1)] = split_leg(km, 0.75, 0.15, rng, 0.0);
    }
    const double start_h = std::clamp(u.departure + p.departure_sd_hours * rng.normal(),
                                      p.earliest_departure_hour, 12.0);
    return schedule(std::move(legs), Seconds{std::llround(start_h * 3600.0)}, p, rng);
}

enum class InjectKind {
    TooShort, TooLong, TooNear, TooFar, TooSlow, TooFast, Merge, Overlap, Malformed
};

InjectKind kind_of_item(const InjectionCounts& c, std::size_t j) {
    const std::size_t counts[] = {c.too_short, c.too_long, c.too_near, c.too_far, c.too_slow,
                                  c.too_fast, c.short_parking_merges, c.overlapping, c.malformed};
    for (std::size_t k = 0; k < std::size(counts); ++k) {
        if (j < counts[k]) {
            return static_cast<InjectKind>(k);
        }
        j -= counts[k];
    }
    return InjectKind::Malformed;
}

TripRecord make_trip(const std::string& user, Timestamp start, Seconds duration, double urban,
                     double extraurban, double highway) {
    return {user, start, start + duration, urban, extraurban, highway};
}

void inject(const GeneratorProfile& p, std::size_t index, GeneratedUser& user) {
    const std::size_t total = p.inject.total();
    if (total == 0 || p.n_users == 0) {
        return;
    }
    // One slot per item, one slot per day starting the day after the horizon,
    // each at 06:00 and over by 19:00, so slots never interact.
    const auto first_day = p.start_date + std::chrono::days{p.horizon_days};
    std::size_t slot = 0;
    for (std::size_t j = index; j < total; j += p.n_users, ++slot) {
        const Timestamp t0 = std::chrono::time_point_cast<Seconds>(
                                 first_day + std::chrono::days{static_cast<int>(slot)}) + 6h;
        const auto& id = user.user_id;
        switch (kind_of_item(p.inject, j)) {
            case InjectKind::TooShort:  // 30 s, 6 km/h
                user.trips.push_back(make_trip(id, t0, 30s, 0.05, 0.0, 0.0));
                break;
            case InjectKind::TooLong:  // 13 h, 50 km/h
                user.trips.push_back(make_trip(id, t0, 13h, 0.0, 0.0, 650.0));
                break;
            case InjectKind::TooNear:  // 2 m in 2 min
                user.trips.push_back(make_trip(id, t0, 2min, 0.002, 0.0, 0.0));
                break;
            case InjectKind::TooFar:  // 900 km in 10 h, 90 km/h
                user.trips.push_back(make_trip(id, t0, 10h, 0.0, 0.0, 900.0));
                break;
            case InjectKind::TooSlow:  // 2 km/h
                user.trips.push_back(make_trip(id, t0, 1h, 2.0, 0.0, 0.0));
                break;
            case InjectKind::TooFast:  // 140 km/h
                user.trips.push_back(make_trip(id, t0, 1h, 0.0, 0.0, 140.0));
                break;
            case InjectKind::Merge:  // two 15 min trips, 60 s apart
                user.trips.push_back(make_trip(id, t0, 15min, 3.0, 5.0, 0.0));
                user.trips.push_back(make_trip(id, t0 + 16min, 15min, 3.0, 5.0, 0.0));
                break;
            case InjectKind::Overlap:  // second starts 10 min into the first
                user.trips.push_back(make_trip(id, t0, 30min, 6.0, 4.0, 0.0));
                user.trips.push_back(make_trip(id, t0 + 10min, 30min, 6.0, 4.0, 0.0));
                break;
            case InjectKind::Malformed: {
                const std::string start = format_timestamp(t0);
                const std::string end = format_timestamp(t0 + 10min);
                switch (user.malformed_rows.size() % 3) {
                    case 0:
                        user.malformed_rows.push_back(id + ",2024-13-45T99:00:00," + end + ",1,0,0");
                        break;
                    case 1:
                        user.malformed_rows.push_back(id + "," + start + "," + end + ",-1,0.5,0");
                        break;
                    default:
                        user.malformed_rows.push_back(id + "," + start + "," + end + ",1,0.5");
                        break;
                }
                break;
            }
        }
    }
}

std::string user_id_for(const GeneratorProfile& p, std::size_t index) {
    std::string digits = std::to_string(index);
    if (digits.size() < 6) {
        digits.insert(0, 6 - digits.size(), '0');
    }
    return p.user_prefix + digits;
}

}  // namespace

void GeneratorProfile::validate() const {
    auto fail = [&](const std::string& what) {
        throw Error(ErrorKind::Usage, "profile '" + name + "': " + what);
    };
    auto prob = [&](double v, const char* field) {
        if (!(v >= 0.0 && v <= 1.0)) {
            fail(std::string(field) + " must be in [0, 1]");
        }
    };
    prob(active_prob_min, "active_prob_min");
    prob(active_prob_max, "active_prob_max");
    prob(weekend_activity, "weekend_activity");
    prob(long_trip_prob, "long_trip_prob");
    prob(commuter_share, "commuter_share");
    prob(highway_share, "highway_share");
    prob(extraurban_share, "extraurban_share");
    if (active_prob_min > active_prob_max) {
        fail("active_prob_min exceeds active_prob_max");
    }
    if (highway_share + extraurban_share > 1.0) {
        fail("highway_share + extraurban_share exceeds 1");
    }
    if (horizon_days < 0) {
        fail("horizon_days must be >= 0");
    }
    if (!(trips_per_day_median > 0.0) || !(daily_km_median > 0.0) || !(commute_km_median > 0.0)) {
        fail("medians must be > 0");
    }
    if (trips_per_day_sigma < 0.0 || daily_km_user_sigma < 0.0 || daily_km_day_sigma < 0.0) {
        fail("sigmas must be >= 0");
    }
    if (max_trips_per_day < 1) {
        fail("max_trips_per_day must be >= 1");
    }
    // 0.2 km in the 90 s minimum trip time is 8 km/h, safely above the
    // slowest accepted average speed.
    if (min_trip_km < 0.2) {
        fail("min_trip_km must be >= 0.2");
    }
    if (long_trip_km_min > long_trip_km_max || long_trip_km_min < min_trip_km ||
        long_trip_km_max > 800.0 || forced_long_trip_km < 0.0 || forced_long_trip_km > 800.0) {
        fail("long trip lengths must satisfy min_trip_km <= min <= max <= 800");
    }
    if (!(earliest_departure_hour >= 0.0 && earliest_departure_hour < day_end_hour &&
          day_end_hour <= 24.0) || departure_sd_hours < 0.0 || min_gap_minutes < 2.5) {
        fail("schedule hours must satisfy 0 <= earliest_departure < day_end <= 24 and "
             "min_gap_minutes >= 2.5");
    }
    if (!(work_hours > 0.0)) {
        fail("work_hours must be > 0");
    }
    const double per_trip_h = 90.0 / 3600.0 + min_gap_minutes / 60.0;
    if (static_cast<double>(max_trips_per_day) * per_trip_h > day_end_hour - earliest_departure_hour) {
        fail("a day cannot fit " + std::to_string(max_trips_per_day) + " trips with " +
             std::to_string(min_gap_minutes) + " min gaps between " +
             std::to_string(earliest_departure_hour) + " h and " + std::to_string(day_end_hour) + " h");
    }
    // long trips are split 75/15/10 highway/extra-urban/urban
    const double longest_h = std::max(long_trip_km_max * (0.75 / kHighwayKmh + 0.15 / kExtraUrbanKmh +
                                                          0.10 / kUrbanKmh),
                                      forced_long_trip_km / kHighwayKmh);
    if (longest_h > day_end_hour - earliest_departure_hour) {
        fail("long trips cannot fit between earliest departure and day end");
    }
    if (daily_km_cap > 0.0 && daily_km_cap < static_cast<double>(max_trips_per_day) * min_trip_km) {
        fail("daily_km_cap is below max_trips_per_day * min_trip_km");
    }
    if (inject.total() > 0 && n_users == 0) {
        fail("violation injection needs at least one user");
    }
}

std::vector<std::string> preset_names() {
    return {"commuter", "long-hauler", "mixed-fleet", "dirty-data"};
}

GeneratorProfile preset_profile(std::string_view name) {
    GeneratorProfile p;
    p.name = std::string(name);
    if (name == "mixed-fleet") {
        p.commuter_share = 0.35;
        return p;
    }
    if (name == "commuter") {
        // Every day stays under 80 km and ends by 20:30, so nightly parking
        // always overlaps 20:00-08:00 by more than 6 h.
        p.n_users = 200;
        p.active_prob_min = 0.9;
        p.active_prob_max = 0.98;
        p.weekend_activity = 0.6;
        p.trips_per_day_median = 2.5;
        p.trips_per_day_sigma = 0.2;
        p.max_trips_per_day = 5;
        p.daily_km_median = 20.0;
        p.daily_km_user_sigma = 0.3;
        p.daily_km_day_sigma = 0.3;
        p.daily_km_cap = 80.0;
        p.long_trip_prob = 0.0;
        p.highway_share = 0.25;
        p.departure_hour = 9.0;
        p.departure_sd_hours = 1.0;
        p.earliest_departure_hour = 6.0;
        p.day_end_hour = 20.5;
        p.commuter_share = 1.0;
        p.commute_km_median = 12.0;
        return p;
    }
    if (name == "long-hauler") {
        // Long daily mileage with short daytime stops; each user opens with
        // a 200 km highway run, beyond the smallest battery.
        p.n_users = 200;
        p.active_prob_min = 0.85;
        p.active_prob_max = 0.95;
        p.weekend_activity = 0.4;
        p.trips_per_day_median = 4.0;
        p.trips_per_day_sigma = 0.2;
        p.max_trips_per_day = 8;
        p.daily_km_median = 230.0;
        p.daily_km_user_sigma = 0.2;
        p.daily_km_day_sigma = 0.3;
        p.long_trip_prob = 0.05;
        p.long_trip_km_min = 200.0;
        p.long_trip_km_max = 450.0;
        p.forced_long_trip_km = 200.0;
        p.highway_share = 0.55;
        p.extraurban_share = 0.3;
        p.departure_hour = 6.5;
        p.departure_sd_hours = 0.5;
        p.day_end_hour = 21.5;
        p.commuter_share = 0.0;
        return p;
    }
    if (name == "dirty-data") {
        p.n_users = 200;
        p.horizon_days = 60;
        p.commuter_share = 0.35;
        p.inject = {100, 25, 25, 25, 25, 25, 40, 20, 30};
        return p;
    }
    throw Error(ErrorKind::Usage, "unknown profile '" + std::string(name) +
                                      "' (expected commuter, long-hauler, mixed-fleet, dirty-data)");
}

std::vector<GeneratorProfile> preset_profiles() {
    std::vector<GeneratorProfile> out;
    for (const auto& n : preset_names()) {
        out.push_back(preset_profile(n));
    }
    return out;
}

namespace {

template <class T>
void read_field(const json& j, const char* key, T& value) {
    if (auto it = j.find(key); it != j.end()) {
        try {
            value = it->get<T>();
        } catch (const json::exception& e) {
            throw Error(ErrorKind::Usage, std::string("profile field '") + key + "': " + e.what());
        }
    }
}

std::chrono::sys_days parse_date(const std::string& text) {
    const auto ts = parse_timestamp(text + "T00:00:00");
    if (!ts) {
        throw Error(ErrorKind::Usage, "profile field 'start_date' must be YYYY-MM-DD, got '" + text + "'");
    }
    return date_of(*ts);
}

}  // namespace

GeneratorProfile profile_from_json(std::string_view json_text) {
    return profile_from_json(json_text, GeneratorProfile{});
}

GeneratorProfile profile_from_json(std::string_view json_text, GeneratorProfile p) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Usage, std::string("profile is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw Error(ErrorKind::Usage, "profile must be a JSON object");
    }
    static const char* const kKnown[] = {
        "preset", "name", "seed", "n_users", "horizon_days", "start_date", "user_prefix",
        "active_prob_min", "active_prob_max", "weekend_activity", "trips_per_day_median",
        "trips_per_day_sigma", "max_trips_per_day", "daily_km_median", "daily_km_user_sigma",
        "daily_km_day_sigma", "daily_km_cap", "min_trip_km", "long_trip_prob", "long_trip_km_min",
        "long_trip_km_max", "forced_long_trip_km", "highway_share", "extraurban_share",
        "departure_hour", "departure_sd_hours", "earliest_departure_hour", "day_end_hour",
        "min_gap_minutes", "commuter_share", "commute_km_median", "work_hours", "inject"};
    for (const auto& [key, value] : j.items()) {
        if (std::find_if(std::begin(kKnown), std::end(kKnown),
                         [&](const char* k) { return key == k; }) == std::end(kKnown)) {
            throw Error(ErrorKind::Usage, "unknown profile field '" + key + "'");
        }
    }
    if (auto it = j.find("preset"); it != j.end()) {
        if (!it->is_string()) {
            throw Error(ErrorKind::Usage, "profile field 'preset' must be a string");
        }
        p = preset_profile(it->get<std::string>());
    }
    read_field(j, "name", p.name);
    read_field(j, "seed", p.seed);
    read_field(j, "n_users", p.n_users);
    read_field(j, "horizon_days", p.horizon_days);
    if (auto it = j.find("start_date"); it != j.end()) {
        p.start_date = parse_date(it->get<std::string>());
    }
    read_field(j, "user_prefix", p.user_prefix);
    read_field(j, "active_prob_min", p.active_prob_min);
    read_field(j, "active_prob_max", p.active_prob_max);
    read_field(j, "weekend_activity", p.weekend_activity);
    read_field(j, "trips_per_day_median", p.trips_per_day_median);
    read_field(j, "trips_per_day_sigma", p.trips_per_day_sigma);
    read_field(j, "max_trips_per_day", p.max_trips_per_day);
    read_field(j, "daily_km_median", p.daily_km_median);
    read_field(j, "daily_km_user_sigma", p.daily_km_user_sigma);
    read_field(j, "daily_km_day_sigma", p.daily_km_day_sigma);
    read_field(j, "daily_km_cap", p.daily_km_cap);
    read_field(j, "min_trip_km", p.min_trip_km);
    read_field(j, "long_trip_prob", p.long_trip_prob);
    read_field(j, "long_trip_km_min", p.long_trip_km_min);
    read_field(j, "long_trip_km_max", p.long_trip_km_max);
    read_field(j, "forced_long_trip_km", p.forced_long_trip_km);
    read_field(j, "highway_share", p.highway_share);
    read_field(j, "extraurban_share", p.extraurban_share);
    read_field(j, "departure_hour", p.departure_hour);
    read_field(j, "departure_sd_hours", p.departure_sd_hours);
    read_field(j, "earliest_departure_hour", p.earliest_departure_hour);
    read_field(j, "day_end_hour", p.day_end_hour);
    read_field(j, "min_gap_minutes", p.min_gap_minutes);
    read_field(j, "commuter_share", p.commuter_share);
    read_field(j, "commute_km_median", p.commute_km_median);
    read_field(j, "work_hours", p.work_hours);
    if (auto it = j.find("inject"); it != j.end()) {
        if (!it->is_object()) {
            throw Error(ErrorKind::Usage, "profile field 'inject' must be an object");
        }
        auto& c = p.inject;
        for (const auto& [key, value] : it->items()) {
            std::size_t* slot = nullptr;
            if (key == "too_short") slot = &c.too_short;
            else if (key == "too_long") slot = &c.too_long;
            else if (key == "too_near") slot = &c.too_near;
            else if (key == "too_far") slot = &c.too_far;
            else if (key == "too_slow") slot = &c.too_slow;
            else if (key == "too_fast") slot = &c.too_fast;
            else if (key == "short_parking_merges") slot = &c.short_parking_merges;
            else if (key == "overlapping") slot = &c.overlapping;
            else if (key == "malformed") slot = &c.malformed;
            else throw Error(ErrorKind::Usage, "unknown inject field '" + key + "'");
            read_field(*it, key.c_str(), *slot);
        }
    }
    p.validate();
    return p;
}

std::string profile_to_json(const GeneratorProfile& p) {
    nlohmann::ordered_json j;
    j["name"] = p.name;
    j["seed"] = p.seed;
    j["n_users"] = p.n_users;
    j["horizon_days"] = p.horizon_days;
    std::string date = format_timestamp(std::chrono::time_point_cast<Seconds>(p.start_date));
    j["start_date"] = date.substr(0, 10);
    j["user_prefix"] = p.user_prefix;
    j["active_prob_min"] = p.active_prob_min;
    j["active_prob_max"] = p.active_prob_max;
    j["weekend_activity"] = p.weekend_activity;
    j["trips_per_day_median"] = p.trips_per_day_median;
    j["trips_per_day_sigma"] = p.trips_per_day_sigma;
    j["max_trips_per_day"] = p.max_trips_per_day;
    j["daily_km_median"] = p.daily_km_median;
    j["daily_km_user_sigma"] = p.daily_km_user_sigma;
    j["daily_km_day_sigma"] = p.daily_km_day_sigma;
    j["daily_km_cap"] = p.daily_km_cap;
    j["min_trip_km"] = p.min_trip_km;
    j["long_trip_prob"] = p.long_trip_prob;
    j["long_trip_km_min"] = p.long_trip_km_min;
    j["long_trip_km_max"] = p.long_trip_km_max;
    j["forced_long_trip_km"] = p.forced_long_trip_km;
    j["highway_share"] = p.highway_share;
    j["extraurban_share"] = p.extraurban_share;
    j["departure_hour"] = p.departure_hour;
    j["departure_sd_hours"] = p.departure_sd_hours;
    j["earliest_departure_hour"] = p.earliest_departure_hour;
    j["day_end_hour"] = p.day_end_hour;
    j["min_gap_minutes"] = p.min_gap_minutes;
    j["commuter_share"] = p.commuter_share;
    j["commute_km_median"] = p.commute_km_median;
    j["work_hours"] = p.work_hours;
    j["inject"] = {{"too_short", p.inject.too_short},
                   {"too_long", p.inject.too_long},
                   {"too_near", p.inject.too_near},
                   {"too_far", p.inject.too_far},
                   {"too_slow", p.inject.too_slow},
                   {"too_fast", p.inject.too_fast},
                   {"short_parking_merges", p.inject.short_parking_merges},
                   {"overlapping", p.inject.overlapping},
                   {"malformed", p.inject.malformed}};
    return j.dump(2);
}

GeneratedUser generate_user(const GeneratorProfile& p, std::size_t index) {
    GeneratedUser user;
    user.user_id = user_id_for(p, index);
    auto rng = Xoshiro256StarStar::substream(p.seed, index);
    const UserTraits traits = draw_traits(p, rng);

    bool forced_pending = p.forced_long_trip_km > 0.0;
    for (int d = 0; d < p.horizon_days; ++d) {
        const auto day = p.start_date + std::chrono::days{d};
        const std::chrono::weekday wd{day};
        const bool weekend = wd == std::chrono::Saturday || wd == std::chrono::Sunday;
        const double active_p = std::min(1.0, traits.active_prob * (weekend ? p.weekend_activity : 1.0));
        if (!rng.bernoulli(active_p)) {
            continue;
        }
        const auto plan = (traits.commuter && !weekend)
                              ? commute_day(p, traits, rng)
                              : general_day(p, traits, forced_pending, rng);
        if (!(traits.commuter && !weekend)) {
            forced_pending = false;
        }
        const Timestamp midnight = std::chrono::time_point_cast<Seconds>(day);
        for (const auto& [offset, leg] : plan) {
            user.trips.push_back(make_trip(user.user_id, midnight + offset, leg.duration(), leg.urban,
                                           leg.extraurban, leg.highway));
        }
    }
    inject(p, index, user);
    return user;
}

void generate(const GeneratorProfile& p, std::ostream& out) {
    p.validate();
    std::string buf(kTripLogHeader);
    buf.push_back('\n');
    for (std::size_t i = 0; i < p.n_users; ++i) {
        const auto user = generate_user(p, i);
        for (const auto& trip : user.trips) {
            append_trip_row(buf, trip);
        }
        for (const auto& row : user.malformed_rows) {
            buf.append(row);
            buf.push_back('\n');
        }
        if (buf.size() > (1u << 20)) {
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

std::string generate(const GeneratorProfile& p) {
    std::ostringstream out;
    generate(p, out);
    return std::move(out).str();
}

}  // namespace evr
