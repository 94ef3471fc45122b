// Copyright 2026 The evreplay Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace evr {

/// Failure classes. The numeric values double as CLI exit codes.
enum class ErrorKind : int {
    Empty = 1,  ///< degenerate input, nothing to compute
    Usage = 2,  ///< bad arguments or configuration
    Io = 3,     ///< unreadable / unwritable files, malformed input streams
    Data = 4,   ///< inconsistent data detected mid-computation
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace evr
