// Copyright 2026 The evreplay Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "evreplay/ingest.hpp"
#include "evreplay/time.hpp"

namespace evr::test {

Timestamp ts(std::string_view text);

TripRecord trip(std::string_view user, std::string_view start, std::string_view end,
                double urban, double extraurban = 0.0, double highway = 0.0);

/// Timeline built directly from already-clean, ordered trips.
UserTimeline timeline(std::vector<TripRecord> trips);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// Fresh, empty directory under `root`.
std::filesystem::path fresh_dir(const std::filesystem::path& root, std::string_view name);

/// Runs a shell command and returns its exit status.
int run(const std::string& command);

}  // namespace evr::test
