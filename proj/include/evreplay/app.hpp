// Copyright 2026 The evreplay Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "evreplay/config.hpp"
#include "evreplay/synthgen.hpp"

namespace evr {

inline constexpr std::string_view kToolName = "evreplay";
inline constexpr std::string_view kToolVersion = "0.1.0";

/// Hex SHA-256 of a file's bytes. Throws Error(Io) when unreadable.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(std::string_view bytes);

// Pipeline commands. Each writes its data products plus manifest.json into
// the output directory and throws evr::Error on failure; the ErrorKind is
// the process exit code.
//
// Output layout:
//   synth:        trips.csv
//   clean:        cleaned.csv, cleaning_report.json, diagnostics.csv
//   characterize: characterization.csv, summary.csv, distributions/<metric>.csv
//   simulate:     user_metrics.csv, matrix.csv, summary.csv,
//                 distributions/<metric>__<policy>__<vehicle>.csv,
//                 traces/<policy>__<vehicle>.csv (with trace on)

void cmd_synth(const GeneratorProfile& profile, const std::filesystem::path& output_dir);

void cmd_clean(const std::vector<std::string>& inputs, const std::filesystem::path& output_dir,
               unsigned jobs = 0);

void cmd_characterize(const std::vector<std::string>& inputs,
                      const std::filesystem::path& output_dir, std::size_t bins = 20,
                      unsigned jobs = 0);

void cmd_simulate(const RunConfig& config);

/// File-name-safe form of a vehicle or policy name: [A-Za-z0-9._-] kept,
/// runs of anything else become a single '-'.
std::string slugify(std::string_view name);

}  // namespace evr
