// Copyright 2026 The evreplay Authors
// SPDX-License-Identifier: Apache-2.0

#include "evreplay/time.hpp"

#include <charconv>

namespace evr {

namespace {

bool parse_fixed(std::string_view text, std::size_t pos, std::size_t width, int& out) {
    if (pos + width > text.size()) {
        return false;
    }
    int value = 0;
    for (std::size_t i = pos; i < pos + width; ++i) {
        const char c = text[i];
        if (c < '0' || c > '9') {
            return false;
        }
        value = value * 10 + (c - '0');
    }
    out = value;
    return true;
}

void append_padded(std::string& out, int value, int width) {
    char buf[8];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    for (int pad = width - static_cast<int>(end - buf); pad > 0; --pad) {
        out.push_back('0');
    }
    out.append(buf, end);
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
    using namespace std::chrono;
    if (text.size() != 19 || text[4] != '-' || text[7] != '-' || text[10] != 'T' ||
        text[13] != ':' || text[16] != ':') {
        return std::nullopt;
    }
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    if (!parse_fixed(text, 0, 4, y) || !parse_fixed(text, 5, 2, mo) || !parse_fixed(text, 8, 2, d) ||
        !parse_fixed(text, 11, 2, h) || !parse_fixed(text, 14, 2, mi) ||
        !parse_fixed(text, 17, 2, s)) {
        return std::nullopt;
    }
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || s > 59) {
        return std::nullopt;
    }
    return time_point_cast<Seconds>(sys_days{ymd}) + hours{h} + minutes{mi} + Seconds{s};
}

void append_timestamp(std::string& out, Timestamp ts) {
    using namespace std::chrono;
    const auto day_point = date_of(ts);
    const year_month_day ymd{day_point};
    const hh_mm_ss hms{ts - time_point_cast<Seconds>(day_point)};
    append_padded(out, static_cast<int>(ymd.year()), 4);
    out.push_back('-');
    append_padded(out, static_cast<int>(static_cast<unsigned>(ymd.month())), 2);
    out.push_back('-');
    append_padded(out, static_cast<int>(static_cast<unsigned>(ymd.day())), 2);
    out.push_back('T');
    append_padded(out, static_cast<int>(hms.hours().count()), 2);
    out.push_back(':');
    append_padded(out, static_cast<int>(hms.minutes().count()), 2);
    out.push_back(':');
    append_padded(out, static_cast<int>(hms.seconds().count()), 2);
}

std::string format_timestamp(Timestamp ts) {
    std::string out;
    out.reserve(19);
    append_timestamp(out, ts);
    return out;
}

}  // namespace evr
