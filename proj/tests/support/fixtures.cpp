// Copyright 2026 The evreplay Authors
// SPDX-License-Identifier: Apache-2.0

#include "fixtures.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <sys/wait.h>

namespace evr::test {

Timestamp ts(std::string_view text) {
    const auto parsed = parse_timestamp(text);
    if (!parsed) {
        throw std::invalid_argument("bad test timestamp " + std::string(text));
    }
    return *parsed;
}

TripRecord trip(std::string_view user, std::string_view start, std::string_view end,
                double urban, double extraurban, double highway) {
    return TripRecord{std::string(user), ts(start), ts(end), urban, extraurban, highway};
}

UserTimeline timeline(std::vector<TripRecord> trips) {
    UserTimeline t;
    t.user_id = trips.empty() ? "u" : trips.front().user_id;
    t.parkings = derive_parkings(trips);
    t.trips = std::move(trips);
    return t;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::filesystem::path fresh_dir(const std::filesystem::path& root, std::string_view name) {
    const auto dir = root / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

int run(const std::string& command) {
    const int status = std::system(command.c_str());
    if (status == -1 || !WIFEXITED(status)) {
        return -1;
    }
    return WEXITSTATUS(status);
}

}  // namespace evr::test
