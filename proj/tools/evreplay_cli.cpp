// Copyright 2026 The evreplay Authors
// SPDX-License-Identifier: Apache-2.0
//
// evreplay command-line front end. Links only the C interface.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "evreplay/evreplay.h"

namespace {

using nlohmann::json;

constexpr const char* kOutputEnv = "EVREPLAY_OUTPUT_DIR";

struct Failure {
    evr_status status;
    std::string message;
};

json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Failure{EVR_USAGE, "config file not found: " + path};
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return json::parse(text.str());
    } catch (const json::exception& e) {
        throw Failure{EVR_USAGE, path + " is not valid JSON: " + e.what()};
    }
}

// Flag beats environment beats config file.
std::string resolve_output(const std::string& flag, const json& config) {
    if (!flag.empty()) {
        return flag;
    }
    if (const char* env = std::getenv(kOutputEnv); env != nullptr && *env != '\0') {
        return env;
    }
    if (const auto it = config.find("output"); it != config.end() && it->is_string()) {
        return it->get<std::string>();
    }
    throw Failure{EVR_USAGE, "no output directory: pass --output or set EVREPLAY_OUTPUT_DIR"};
}

json scenario_entry(const std::string& text) {
    if (!text.empty() && text.find_first_not_of("0123456789") == std::string::npos) {
        return std::stoi(text);
    }
    return text;
}

class Context {
public:
    Context() {
        if (evr_context_create(&ctx_) != EVR_OK) {
            throw Failure{EVR_INTERNAL, "cannot create context"};
        }
    }
    ~Context() { evr_context_destroy(ctx_); }
    Context(const Context&) = delete;
    Context& operator=(const Context&) = delete;

    evr_context* get() { return ctx_; }

    void check(evr_status status) {
        if (status != EVR_OK) {
            throw Failure{status, evr_context_last_error(ctx_)};
        }
    }

private:
    evr_context* ctx_ = nullptr;
};

std::vector<const char*> c_strings(const std::vector<std::string>& items) {
    std::vector<const char*> out;
    out.reserve(items.size());
    for (const auto& s : items) {
        out.push_back(s.c_str());
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Replay trip logs against electric vehicle and charging policy models."};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(evr_version()));

    std::string config_path;
    std::vector<std::string> inputs;
    std::string output;
    std::string profile_name;
    std::uint64_t seed = 0;
    std::size_t users = 0;
    int days = 0;
    std::vector<std::string> scenarios;
    std::vector<std::string> vehicles;
    std::size_t bins = 20;
    bool trace = false;
    unsigned jobs = 0;

    auto* synth = app.add_subcommand("synth", "Generate a synthetic trip log");
    synth->add_option("--profile", profile_name, "Preset name (mixed-fleet, commuter, long-hauler, dirty-data)");
    synth->add_option("--config", config_path, "Profile JSON file")->check(CLI::ExistingFile);
    auto* seed_opt = synth->add_option("--seed", seed, "Override the profile seed");
    auto* users_opt = synth->add_option("--users", users, "Override the user count");
    auto* days_opt = synth->add_option("--days", days, "Override the horizon in days");
    synth->add_option("--output", output, "Output directory");

    auto* clean = app.add_subcommand("clean", "Clean a trip log");
    clean->add_option("--input", inputs, "Trip log CSV")->required();
    clean->add_option("--output", output, "Output directory");
    clean->add_option("--jobs", jobs, "Worker threads (0 = all cores)");

    auto* characterize = app.add_subcommand("characterize", "Per-user driving statistics");
    characterize->add_option("--input", inputs, "Trip log CSV")->required();
    characterize->add_option("--output", output, "Output directory");
    auto* char_bins = characterize->add_option("--bins", bins, "Histogram bins");
    char_bins->check(CLI::PositiveNumber);
    characterize->add_option("--jobs", jobs, "Worker threads (0 = all cores)");

    auto* simulate = app.add_subcommand("simulate", "Simulate every user x vehicle x policy");
    simulate->add_option("--config", config_path, "Run configuration JSON");
    simulate->add_option("--input", inputs, "Trip log CSV");
    simulate->add_option("--output", output, "Output directory");
    simulate->add_option("--scenarios", scenarios, "Scenario numbers, comma separated")->delimiter(',');
    simulate->add_option("--vehicles", vehicles, "Built-in vehicle names, comma separated")->delimiter(',');
    auto* sim_bins = simulate->add_option("--bins", bins, "Histogram bins");
    sim_bins->check(CLI::PositiveNumber);
    simulate->add_flag("--trace", trace, "Write per-trip SoC traces");
    auto* sim_jobs = simulate->add_option("--jobs", jobs, "Worker threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : EVR_USAGE;
    }

    try {
        Context ctx;
        if (synth->parsed()) {
            json profile = config_path.empty() ? json::object() : read_json_file(config_path);
            if (!profile.is_object()) {
                throw Failure{EVR_USAGE, "profile must be a JSON object"};
            }
            if (!profile_name.empty()) {
                profile["preset"] = profile_name;
            }
            if (*seed_opt) {
                profile["seed"] = seed;
            }
            if (*users_opt) {
                profile["n_users"] = users;
            }
            if (*days_opt) {
                profile["horizon_days"] = days;
            }
            const std::string out = resolve_output(output, json::object());
            ctx.check(evr_run_synth(ctx.get(), profile.dump().c_str(), out.c_str()));
            std::cout << "wrote " << out << '\n';
        } else if (clean->parsed()) {
            const std::string out = resolve_output(output, json::object());
            ctx.check(evr_context_set_jobs(ctx.get(), jobs));
            const auto paths = c_strings(inputs);
            ctx.check(evr_run_clean(ctx.get(), paths.data(), paths.size(), out.c_str()));
            std::cout << "wrote " << out << '\n';
        } else if (characterize->parsed()) {
            const std::string out = resolve_output(output, json::object());
            ctx.check(evr_context_set_jobs(ctx.get(), jobs));
            const auto paths = c_strings(inputs);
            ctx.check(evr_run_characterize(ctx.get(), paths.data(), paths.size(), out.c_str(), bins));
            std::cout << "wrote " << out << '\n';
        } else if (simulate->parsed()) {
            json config = config_path.empty() ? json::object() : read_json_file(config_path);
            if (!config.is_object()) {
                throw Failure{EVR_USAGE, "config must be a JSON object"};
            }
            config["output"] = resolve_output(output, config);
            if (!inputs.empty()) {
                config["input"] = inputs;
            }
            if (!scenarios.empty()) {
                config["policies"] = json::array();
                for (const auto& s : scenarios) {
                    config["policies"].push_back(scenario_entry(s));
                }
            }
            if (!vehicles.empty()) {
                config["vehicles"] = vehicles;
            }
            if (*sim_bins) {
                config["bins"] = bins;
            }
            if (trace) {
                config["trace"] = true;
            }
            if (*sim_jobs) {
                config["jobs"] = jobs;
            }
            ctx.check(evr_run_simulate(ctx.get(), config.dump().c_str()));
            std::cout << "wrote " << config["output"].get<std::string>() << '\n';
        }
    } catch (const Failure& f) {
        std::cerr << "evreplay: " << f.message << '\n';
        return f.status == EVR_INTERNAL || f.status == EVR_DATA ? EVR_EMPTY : f.status;
    }
    return 0;
}
