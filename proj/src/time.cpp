#include "biastrace/time.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace biastrace {

namespace {

bool parse_uint(std::string_view s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    int value = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        char c = s[i];
        if (c < '0' || c > '9') return false;
        value = value * 10 + (c - '0');
    }
    out = value;
    return true;
}

// Days since 1970-01-01 for a proleptic Gregorian civil date.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

bool valid_date(int y, int mo, int d) {
    if (y < 1970 || y > 9999 || mo < 1 || mo > 12 || d < 1) return false;
    static constexpr std::array<int, 12> dim{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int max_d = dim[static_cast<std::size_t>(mo - 1)];
    if (mo == 2 && (y % 4 == 0 && (y % 100 != 0 || y % 400 == 0))) max_d = 29;
    return d <= max_d;
}

} // namespace

std::optional<ParsedTimestamp> parse_timestamp_prefix(std::string_view s) {
    int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
    if (!parse_uint(s, 0, 4, year) || s.size() < 16) return std::nullopt;
    if (s[4] != '-' || !parse_uint(s, 5, 2, month)) return std::nullopt;
    if (s[7] != '-' || !parse_uint(s, 8, 2, day)) return std::nullopt;
    if (!valid_date(year, month, day)) return std::nullopt;
    const char sep = s[10];
    if (sep != 'T' && sep != ' ') return std::nullopt;
    if (!parse_uint(s, 11, 2, hour) || s[13] != ':' || !parse_uint(s, 14, 2, minute)) {
        return std::nullopt;
    }
    if (hour > 23 || minute > 59) return std::nullopt;

    std::size_t pos = 16;
    bool have_seconds = false;
    if (pos + 1 < s.size() && s[pos] == ':' && parse_uint(s, pos + 1, 2, second)) {
        if (second > 60) return std::nullopt; // allow leap-second notation
        have_seconds = true;
        pos += 3;
    }

    int millis = 0;
    if (have_seconds && pos < s.size() && s[pos] == '.') {
        std::size_t frac_start = pos + 1;
        std::size_t frac_end = frac_start;
        while (frac_end < s.size() && s[frac_end] >= '0' && s[frac_end] <= '9') ++frac_end;
        if (frac_end == frac_start) return std::nullopt;
        int scale = 100;
        for (std::size_t i = frac_start; i < frac_end && scale > 0; ++i) {
            millis += (s[i] - '0') * scale;
            scale /= 10;
        }
        pos = frac_end;
    }

    std::int64_t offset_min = 0;
    if (pos < s.size()) {
        if (s[pos] == 'Z') {
            ++pos;
        } else if (s[pos] == '+' || s[pos] == '-') {
            int oh = 0, om = 0;
            const bool neg = s[pos] == '-';
            if (!parse_uint(s, pos + 1, 2, oh)) return std::nullopt;
            std::size_t mpos = pos + 3;
            if (mpos < s.size() && s[mpos] == ':') ++mpos;
            if (!parse_uint(s, mpos, 2, om)) return std::nullopt;
            if (oh > 14 || om > 59) return std::nullopt;
            offset_min = oh * 60 + om;
            if (neg) offset_min = -offset_min;
            pos = mpos + 2;
        }
    }

    std::int64_t total_s = days_from_civil(year, month, day) * 86400 +
                           hour * 3600 + minute * 60 + second - offset_min * 60;
    return ParsedTimestamp{total_s * 1000 + millis, pos};
}

std::optional<TimestampMs> parse_timestamp(std::string_view text) {
    auto parsed = parse_timestamp_prefix(text);
    if (!parsed || parsed->consumed != text.size()) return std::nullopt;
    return parsed->value;
}

std::string format_iso8601(TimestampMs ts) {
    std::int64_t total_s = ts / 1000;
    int millis = static_cast<int>(ts % 1000);
    if (millis < 0) {
        millis += 1000;
        total_s -= 1;
    }
    std::int64_t days = total_s / 86400;
    std::int64_t rem = total_s % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    int y = 0, m = 0, d = 0;
    civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", y, m, d,
                  static_cast<int>(rem / 3600), static_cast<int>((rem % 3600) / 60),
                  static_cast<int>(rem % 60), millis);
    return buf;
}

} // namespace biastrace
