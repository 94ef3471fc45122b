// Copyright 2026 The evreplay Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdlib>

#include "fixtures.hpp"

namespace fs = std::filesystem;
using evr::test::fresh_dir;
using evr::test::read_file;
using evr::test::run;

namespace {

const fs::path kRoot = EVREPLAY_TEST_TMP;

int cli(const std::string& args) {
    return run(std::string("\"") + EVREPLAY_CLI + "\" " + args + " >/dev/null 2>" +
               (kRoot / "stderr.txt").string());
}

std::string last_stderr() {
    return read_file(kRoot / "stderr.txt");
}

}  // namespace

TEST_CASE("end to end through the command line") {
    fs::create_directories(kRoot);
    const auto data = fresh_dir(kRoot, "data");
    REQUIRE(cli("synth --profile commuter --users 8 --days 14 --seed 3 --output " + data.string()) == 0);
    REQUIRE(fs::exists(data / "trips.csv"));
    const auto trips = (data / "trips.csv").string();

    const auto cleaned = fresh_dir(kRoot, "cleaned");
    CHECK(cli("clean --input " + trips + " --output " + cleaned.string()) == 0);
    CHECK(read_file(cleaned / "cleaned.csv") == read_file(trips));

    const auto chars = fresh_dir(kRoot, "chars");
    CHECK(cli("characterize --input " + trips + " --output " + chars.string() + " --bins 4") == 0);

    const auto sim = fresh_dir(kRoot, "sim");
    CHECK(cli("simulate --input " + trips + " --output " + sim.string() +
              " --scenarios 1,3 --vehicles \"Fiat 500e,Tesla Model 3\" --trace --jobs 2") == 0);
    CHECK(read_file(sim / "matrix.csv").find("scenario3,Tesla Model 3,8,") != std::string::npos);
    CHECK(fs::exists(sim / "traces" / "scenario3__Fiat-500e.csv"));
}

TEST_CASE("exit codes") {
    fs::create_directories(kRoot);
    const auto out = (kRoot / "exit_out").string();
    CHECK(cli("synth --profile nope --output " + out) == 2);
    CHECK(last_stderr().find("unknown profile") != std::string::npos);
    CHECK(cli("clean --input " + (kRoot / "missing.csv").string() + " --output " + out) == 2);
    CHECK(cli("bogus") == 2);
    CHECK(cli("") == 2);
    CHECK(cli("simulate --input x.csv --output " + out + " --vehicles Nope") == 2);
    CHECK(last_stderr().find("unknown vehicle") != std::string::npos);
    CHECK(cli("simulate --input x.csv --output " + out + " --scenarios 7") == 2);

    const auto empty = fresh_dir(kRoot, "empty");
    evr::test::write_file(empty / "trips.csv", "user_id,start_ts,end_ts,km_urban,km_extraurban,km_highway\n");
    CHECK(cli("characterize --input " + (empty / "trips.csv").string() + " --output " + out) == 1);
    CHECK(last_stderr().find("no users") != std::string::npos);
    CHECK(cli("simulate --input " + (empty / "trips.csv").string() + " --output " + out) == 1);

    evr::test::write_file(empty / "bad.csv", "not,a,trip,log\n");
    CHECK(cli("clean --input " + (empty / "bad.csv").string() + " --output " + out) == 3);

    evr::test::write_file(empty / "blocker", "x");
    CHECK(cli("clean --input " + (empty / "trips.csv").string() + " --output " +
              (empty / "blocker" / "sub").string()) == 3);
}

TEST_CASE("output directory precedence and config files") {
    fs::create_directories(kRoot);
    const auto data = fresh_dir(kRoot, "prec_data");
    REQUIRE(cli("synth --profile commuter --users 3 --days 7 --output " + data.string()) == 0);
    const auto cfg = kRoot / "run.json";
    const auto from_config = kRoot / "from_config";
    const auto from_env = kRoot / "from_env";
    fs::remove_all(from_config);
    fs::remove_all(from_env);
    evr::test::write_file(cfg, "{\"input\": \"" + (data / "trips.csv").string() + "\", \"output\": \"" +
                                   from_config.string() + "\", \"policies\": [3], \"vehicles\": [\"Fiat 500e\"]}");
    CHECK(cli("simulate --config " + cfg.string()) == 0);
    CHECK(fs::exists(from_config / "matrix.csv"));
    CHECK(run("EVREPLAY_OUTPUT_DIR=" + from_env.string() + " \"" + EVREPLAY_CLI + "\" simulate --config " +
              cfg.string() + " >/dev/null") == 0);
    CHECK(fs::exists(from_env / "matrix.csv"));
    CHECK(read_file(from_env / "matrix.csv") == read_file(from_config / "matrix.csv"));

    evr::test::write_file(kRoot / "broken.json", "{");
    CHECK(cli("simulate --config " + (kRoot / "broken.json").string()) == 2);

    const auto profile = kRoot / "profile.json";
    evr::test::write_file(profile, R"({"preset": "long-hauler", "n_users": 2, "horizon_days": 5})");
    const auto synth_out = fresh_dir(kRoot, "profile_out");
    CHECK(cli("synth --config " + profile.string() + " --output " + synth_out.string()) == 0);
    CHECK(fs::exists(synth_out / "manifest.json"));
}
