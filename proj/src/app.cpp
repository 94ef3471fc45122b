// Copyright 2026 The evreplay Authors
// SPDX-License-Identifier: Apache-2.0

#include "evreplay/app.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "evreplay/error.hpp"
#include "evreplay/ingest.hpp"
#include "evreplay/metrics.hpp"
#include "evreplay/parallel.hpp"
#include "evreplay/sim.hpp"

namespace evr {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

class Sha256 {
public:
    Sha256() : ctx_(EVP_MD_CTX_new()) {
        if (ctx_ == nullptr || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) {
            throw Error(ErrorKind::Io, "SHA-256 initialisation failed");
        }
    }
    ~Sha256() { EVP_MD_CTX_free(ctx_); }
    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;

    void update(const char* data, std::size_t n) { EVP_DigestUpdate(ctx_, data, n); }

    std::string hex() {
        unsigned char md[EVP_MAX_MD_SIZE];
        unsigned int len = 0;
        EVP_DigestFinal_ex(ctx_, md, &len);
        static constexpr char kDigits[] = "0123456789abcdef";
        std::string out;
        out.reserve(2 * len);
        for (unsigned i = 0; i < len; ++i) {
            out.push_back(kDigits[md[i] >> 4]);
            out.push_back(kDigits[md[i] & 0xF]);
        }
        return out;
    }

private:
    EVP_MD_CTX* ctx_;
};

std::string utc_now_iso() {
    const auto now = std::chrono::time_point_cast<Seconds>(std::chrono::system_clock::now());
    return format_timestamp(now) + "Z";
}

// Run manifest. Everything except the "wall_clock" object is a pure
// function of the configuration and the input bytes.
class Manifest {
public:
    Manifest(std::string_view command, ordered_json config)
        : started_(std::chrono::steady_clock::now()), started_at_(utc_now_iso()) {
        j_["tool"] = kToolName;
        j_["version"] = kToolVersion;
        j_["command"] = command;
        j_["config"] = std::move(config);
        j_["inputs"] = ordered_json::array();
        j_["outputs"] = ordered_json::array();
        j_["counts"] = ordered_json::object();
    }

    void add_input(const std::string& path) {
        j_["inputs"].push_back({{"path", path},
                                {"bytes", fs::file_size(path)},
                                {"sha256", sha256_file(path)}});
    }

    void add_output(const fs::path& dir, const std::string& relative) {
        const auto full = dir / relative;
        j_["outputs"].push_back({{"path", relative},
                                 {"bytes", fs::file_size(full)},
                                 {"sha256", sha256_file(full)}});
    }

    ordered_json& counts() { return j_["counts"]; }

    void write(const fs::path& dir) {
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
        j_["wall_clock"] = {{"started_at", started_at_}, {"duration_seconds", elapsed}};
        std::ofstream out(dir / "manifest.json", std::ios::binary);
        out << j_.dump(2) << '\n';
        if (!out) {
            throw Error(ErrorKind::Io, "cannot write " + (dir / "manifest.json").string());
        }
    }

private:
    ordered_json j_;
    std::chrono::steady_clock::time_point started_;
    std::string started_at_;
};

void ensure_output_dir(const fs::path& dir) {
    if (dir.empty()) {
        throw Error(ErrorKind::Usage, "no output directory given");
    }
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw Error(ErrorKind::Io, "cannot create output directory " + dir.string() + ": " +
                                       ec.message());
    }
}

void write_file(const fs::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw Error(ErrorKind::Io, "cannot write " + path.string());
    }
}

void check_inputs(const std::vector<std::string>& inputs) {
    if (inputs.empty()) {
        throw Error(ErrorKind::Usage, "no input file given");
    }
    for (const auto& in : inputs) {
        std::error_code ec;
        if (!fs::is_regular_file(in, ec)) {
            throw Error(ErrorKind::Usage, "input file not found: " + in);
        }
    }
}

ParseResult read_inputs(const std::vector<std::string>& inputs) {
    ParseResult all;
    for (const auto& path : inputs) {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw Error(ErrorKind::Io, "cannot open " + path);
        }
        auto part = parse_trip_log(in);
        all.rows += part.rows;
        all.trips.insert(all.trips.end(), std::make_move_iterator(part.trips.begin()),
                         std::make_move_iterator(part.trips.end()));
        for (auto& d : part.diagnostics) {
            if (inputs.size() > 1) {
                d.message = path + ": " + d.message;
            }
            all.diagnostics.push_back(std::move(d));
        }
    }
    return all;
}

void append_quoted(std::string& out, std::string_view text) {
    out.push_back('"');
    for (char c : text) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
}

std::string diagnostics_csv(const std::vector<Diagnostic>& diagnostics) {
    std::string out = "line,user_id,message\n";
    for (const auto& d : diagnostics) {
        out.append(std::to_string(d.line));
        out.push_back(',');
        append_quoted(out, d.user_id);
        out.push_back(',');
        append_quoted(out, d.message);
        out.push_back('\n');
    }
    return out;
}

unsigned resolve_jobs(unsigned jobs) {
    return jobs == 0 ? default_jobs() : jobs;
}

// Calendar days from the first trip start to the last trip end, inclusive.
double observation_span_days(const std::vector<UserTimeline>& users) {
    auto first = std::chrono::sys_days::max();
    auto last = std::chrono::sys_days::min();
    for (const auto& u : users) {
        for (const auto& t : u.trips) {
            first = std::min(first, date_of(t.start_ts));
            last = std::max(last, date_of(t.end_ts));
        }
    }
    return static_cast<double>((last - first).count() + 1);
}

ordered_json report_counts(const CleaningReport& r) {
    return ordered_json::parse(to_json(r));
}

}  // namespace

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot read " + path.string());
    }
    Sha256 sha;
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        sha.update(buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    if (in.bad()) {
        throw Error(ErrorKind::Io, "failed reading " + path.string());
    }
    return sha.hex();
}

std::string sha256_hex(std::string_view bytes) {
    Sha256 sha;
    sha.update(bytes.data(), bytes.size());
    return sha.hex();
}

std::string slugify(std::string_view name) {
    std::string out;
    bool pending_dash = false;
    for (char c : name) {
        const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                          (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
        if (!keep) {
            pending_dash = !out.empty();
            continue;
        }
        if (pending_dash) {
            out.push_back('-');
            pending_dash = false;
        }
        out.push_back(c);
    }
    return out.empty() ? "unnamed" : out;
}

void cmd_synth(const GeneratorProfile& profile, const fs::path& output_dir) {
    profile.validate();
    ensure_output_dir(output_dir);
    Manifest manifest("synth", ordered_json::parse(profile_to_json(profile)));
    {
        std::ofstream out(output_dir / "trips.csv", std::ios::binary);
        if (!out) {
            throw Error(ErrorKind::Io, "cannot write " + (output_dir / "trips.csv").string());
        }
        generate(profile, out);
        if (!out) {
            throw Error(ErrorKind::Io, "failed writing " + (output_dir / "trips.csv").string());
        }
    }
    manifest.add_output(output_dir, "trips.csv");
    manifest.counts()["users"] = profile.n_users;
    manifest.counts()["injected"] = profile.inject.total();
    manifest.write(output_dir);
}

void cmd_clean(const std::vector<std::string>& inputs, const fs::path& output_dir,
               unsigned jobs) {
    check_inputs(inputs);
    ensure_output_dir(output_dir);
    Manifest manifest("clean", {{"input", inputs}, {"output", output_dir.string()}});
    for (const auto& in : inputs) {
        manifest.add_input(in);
    }
    auto cleaned = clean_trip_log(read_inputs(inputs), resolve_jobs(jobs));
    {
        std::ofstream out(output_dir / "cleaned.csv", std::ios::binary);
        write_cleaned_log(out, cleaned.users);
        if (!out) {
            throw Error(ErrorKind::Io, "failed writing " + (output_dir / "cleaned.csv").string());
        }
    }
    write_file(output_dir / "cleaning_report.json", to_json(cleaned.report));
    write_file(output_dir / "diagnostics.csv", diagnostics_csv(cleaned.diagnostics));
    for (const char* name : {"cleaned.csv", "cleaning_report.json", "diagnostics.csv"}) {
        manifest.add_output(output_dir, name);
    }
    manifest.counts() = report_counts(cleaned.report);
    manifest.counts()["users"] = cleaned.users.size();
    manifest.write(output_dir);
}

void cmd_characterize(const std::vector<std::string>& inputs, const fs::path& output_dir,
                      std::size_t bins, unsigned jobs) {
    check_inputs(inputs);
    if (bins == 0) {
        throw Error(ErrorKind::Usage, "bins must be >= 1");
    }
    ensure_output_dir(output_dir);
    Manifest manifest("characterize",
                      {{"input", inputs}, {"output", output_dir.string()}, {"bins", bins}});
    for (const auto& in : inputs) {
        manifest.add_input(in);
    }
    const auto cleaned = clean_trip_log(read_inputs(inputs), resolve_jobs(jobs));
    if (cleaned.users.empty()) {
        throw Error(ErrorKind::Empty, "no users with cleaned trips in input");
    }
    std::vector<UserCharacterization> rows(cleaned.users.size());
    parallel_for(rows.size(), resolve_jobs(jobs), [&](std::size_t i) {
        rows[i] = characterize_user(cleaned.users[i].user_id, cleaned.users[i].trips);
    });

    std::string table(kCharacterizationHeader);
    table.push_back('\n');
    for (const auto& c : rows) {
        append_characterization_row(table, c);
    }
    write_file(output_dir / "characterization.csv", table);
    manifest.add_output(output_dir, "characterization.csv");

    const std::pair<const char*, double UserCharacterization::*> metrics[] = {
        {"avg_daily_trips", &UserCharacterization::avg_daily_trips},
        {"avg_daily_distance_km", &UserCharacterization::avg_daily_distance_km},
        {"utilization_pct", &UserCharacterization::utilization_pct},
    };
    fs::create_directories(output_dir / "distributions");
    std::string summary(kCharacterizationSummaryHeader);
    summary.push_back('\n');
    for (const auto& [name, field] : metrics) {
        std::vector<double> values;
        values.reserve(rows.size());
        for (const auto& c : rows) {
            values.push_back(c.*field);
        }
        const auto dist = aggregate(values, bins);
        summary.append(name);
        append_summary_stats(summary, dist);
        summary.push_back('\n');
        const std::string rel = std::string("distributions/") + name + ".csv";
        write_file(output_dir / rel, histogram_csv(dist));
        manifest.add_output(output_dir, rel);
    }
    write_file(output_dir / "summary.csv", summary);
    manifest.add_output(output_dir, "summary.csv");

    manifest.counts() = report_counts(cleaned.report);
    manifest.counts()["users"] = rows.size();
    manifest.write(output_dir);
}

void cmd_simulate(const RunConfig& config) {
    // Configuration problems surface before any input is read.
    for (const auto& v : config.vehicles) {
        v.validate();
    }
    for (const auto& p : config.policies) {
        p.validate();
    }
    check_inputs(config.inputs);
    const fs::path output_dir = config.output_dir;
    ensure_output_dir(output_dir);
    const unsigned jobs = resolve_jobs(config.jobs);

    Manifest manifest("simulate", config.snapshot());
    for (const auto& in : config.inputs) {
        manifest.add_input(in);
    }
    const auto cleaned = clean_trip_log(read_inputs(config.inputs), jobs);
    const auto& users = cleaned.users;
    if (users.empty()) {
        throw Error(ErrorKind::Empty, "no users with cleaned trips in input");
    }
    const double days = config.observation_days.value_or(observation_span_days(users));

    const std::size_t n_vehicles = config.vehicles.size();
    const std::size_t n_policies = config.policies.size();
    const std::size_t per_user = n_vehicles * n_policies;
    // slot (u, p, v) -> u * per_user + p * n_vehicles + v
    std::vector<std::optional<UserMetrics>> metrics(users.size() * per_user);
    std::vector<std::string> traces(config.trace ? users.size() * per_user : 0);
    std::vector<std::string> failures(users.size());
    parallel_for(users.size(), jobs, [&](std::size_t u) {
        try {
            for (std::size_t p = 0; p < n_policies; ++p) {
                for (std::size_t v = 0; v < n_vehicles; ++v) {
                    const auto result = simulate_user(users[u], config.vehicles[v], config.policies[p],
                                                      config.initial_soc_fraction);
                    const std::size_t slot = u * per_user + p * n_vehicles + v;
                    metrics[slot] = user_metrics(result, days);
                    if (config.trace) {
                        append_trace_rows(traces[slot], users[u], result);
                    }
                }
            }
        } catch (const Error& e) {
            failures[u] = e.what();
        }
    });
    std::size_t failed_users = 0;
    for (const auto& f : failures) {
        failed_users += f.empty() ? 0 : 1;
    }

    std::vector<UserMetrics> flat;
    flat.reserve(metrics.size());
    std::string per_user_csv(kUserMetricsHeader);
    per_user_csv.push_back('\n');
    for (std::size_t p = 0; p < n_policies; ++p) {
        for (std::size_t v = 0; v < n_vehicles; ++v) {
            for (std::size_t u = 0; u < users.size(); ++u) {
                const auto& m = metrics[u * per_user + p * n_vehicles + v];
                if (m) {
                    append_user_metrics_row(per_user_csv, *m);
                    flat.push_back(*m);
                }
            }
        }
    }
    write_file(output_dir / "user_metrics.csv", per_user_csv);
    manifest.add_output(output_dir, "user_metrics.csv");

    std::vector<std::string> policy_names;
    std::vector<std::string> vehicle_names;
    for (const auto& p : config.policies) {
        policy_names.push_back(p.name);
    }
    for (const auto& v : config.vehicles) {
        vehicle_names.push_back(v.name);
    }
    if (flat.empty()) {
        throw Error(ErrorKind::Empty, "no user could be simulated");
    }
    const auto matrix = scenario_vehicle_matrix(flat, policy_names, vehicle_names);
    std::string matrix_csv(kMatrixHeader);
    matrix_csv.push_back('\n');
    for (const auto& cell : matrix) {
        append_matrix_row(matrix_csv, cell);
    }
    write_file(output_dir / "matrix.csv", matrix_csv);
    manifest.add_output(output_dir, "matrix.csv");

    const std::pair<const char*, double UserMetrics::*> fields[] = {
        {"feasible_trip_pct", &UserMetrics::feasible_trip_pct},
        {"monthly_charges", &UserMetrics::monthly_charges},
        {"avg_soc_after_trip_pct", &UserMetrics::avg_soc_after_trip_pct},
    };
    fs::create_directories(output_dir / "distributions");
    std::string summary(kSummaryHeader);
    summary.push_back('\n');
    std::vector<std::string> dist_files;
    for (const auto& [name, field] : fields) {
        for (std::size_t p = 0; p < n_policies; ++p) {
            for (std::size_t v = 0; v < n_vehicles; ++v) {
                std::vector<double> values;
                for (std::size_t u = 0; u < users.size(); ++u) {
                    if (const auto& m = metrics[u * per_user + p * n_vehicles + v]) {
                        values.push_back((*m).*field);
                    }
                }
                const auto dist = aggregate(values, config.bins);
                append_summary_row(summary, name, policy_names[p], vehicle_names[v], dist);
                const std::string rel = std::string("distributions/") + name + "__" +
                                        slugify(policy_names[p]) + "__" +
                                        slugify(vehicle_names[v]) + ".csv";
                write_file(output_dir / rel, histogram_csv(dist));
                dist_files.push_back(rel);
            }
        }
    }
    write_file(output_dir / "summary.csv", summary);
    manifest.add_output(output_dir, "summary.csv");
    for (const auto& rel : dist_files) {
        manifest.add_output(output_dir, rel);
    }

    if (config.trace) {
        fs::create_directories(output_dir / "traces");
        for (std::size_t p = 0; p < n_policies; ++p) {
            for (std::size_t v = 0; v < n_vehicles; ++v) {
                std::string csv(kTraceHeader);
                csv.push_back('\n');
                for (std::size_t u = 0; u < users.size(); ++u) {
                    csv.append(traces[u * per_user + p * n_vehicles + v]);
                }
                const std::string rel = "traces/" + slugify(policy_names[p]) + "__" +
                                        slugify(vehicle_names[v]) + ".csv";
                write_file(output_dir / rel, csv);
                manifest.add_output(output_dir, rel);
            }
        }
    }

    std::size_t trips = 0;
    for (const auto& u : users) {
        trips += u.trips.size();
    }
    std::size_t charges = 0;
    std::size_t infeasible = 0;
    for (const auto& m : flat) {
        charges += m.charge_events;
        infeasible += m.trips - m.feasible_trips;
    }
    auto& counts = manifest.counts();
    counts["cleaning"] = report_counts(cleaned.report);
    counts["users"] = users.size();
    counts["failed_users"] = failed_users;
    counts["trips"] = trips;
    counts["observation_days"] = days;
    counts["simulations"] = flat.size();
    counts["charge_events"] = charges;
    counts["infeasible_trips"] = infeasible;
    manifest.write(output_dir);
}

}  // namespace evr
