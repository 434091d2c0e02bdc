#include "sentiforge/time.hpp"

#include <array>
#include <charconv>
#include <cstdio>

#include "sentiforge/common.hpp"

namespace sentiforge::utc {

namespace {

// Howard Hinnant's civil-days algorithms, public domain.
constexpr std::int64_t days_from_civil_impl(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

int parse_int(std::string_view s, std::size_t pos, std::size_t len) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, value);
    if (ec != std::errc{} || ptr != s.data() + pos + len) {
        throw DataError("malformed timestamp field in '" + std::string(s) + "'");
    }
    return value;
}

}  // namespace

std::int64_t days_from_civil(int year, unsigned month, unsigned day) {
    return days_from_civil_impl(year, month, day);
}

CivilDate civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return CivilDate{static_cast<int>(y + (m <= 2)), m, d};
}

std::int64_t to_epoch(int year, unsigned month, unsigned day,
                      unsigned hour, unsigned minute, unsigned second) {
    return days_from_civil(year, month, day) * kSecondsPerDay +
           hour * 3600 + minute * 60 + second;
}

std::int64_t parse_day(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw DataError("expected YYYY-MM-DD, got '" + std::string(text) + "'");
    }
    const int y = parse_int(text, 0, 4);
    const int m = parse_int(text, 5, 2);
    const int d = parse_int(text, 8, 2);
    if (m < 1 || m > 12 || d < 1 || d > 31) {
        throw DataError("calendar field out of range in '" + std::string(text) + "'");
    }
    return days_from_civil(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

std::int64_t parse_timestamp(std::string_view text) {
    if (text.size() == 10) return parse_day(text) * kSecondsPerDay;
    std::string_view t = text;
    if (!t.empty() && (t.back() == 'Z' || t.back() == 'z')) t.remove_suffix(1);
    if (t.size() != 19 || (t[10] != 'T' && t[10] != ' ') || t[13] != ':' || t[16] != ':') {
        throw DataError("expected ISO-8601 timestamp, got '" + std::string(text) + "'");
    }
    const std::int64_t day = parse_day(t.substr(0, 10));
    const int hh = parse_int(t, 11, 2);
    const int mm = parse_int(t, 14, 2);
    const int ss = parse_int(t, 17, 2);
    if (hh > 23 || mm > 59 || ss > 60) {
        throw DataError("time of day out of range in '" + std::string(text) + "'");
    }
    return day * kSecondsPerDay + hh * 3600 + mm * 60 + ss;
}

std::string format_day(std::int64_t days_since_epoch) {
    const CivilDate c = civil_from_days(days_since_epoch);
    std::array<char, 16> buf{};
    std::snprintf(buf.data(), buf.size(), "%04d-%02u-%02u", c.year, c.month, c.day);
    return std::string(buf.data());
}

std::string format_timestamp(std::int64_t epoch_seconds) {
    const std::int64_t day = day_of(epoch_seconds);
    std::int64_t rem = epoch_seconds - day * kSecondsPerDay;
    const int hh = static_cast<int>(rem / 3600);
    const int mm = static_cast<int>((rem % 3600) / 60);
    const int ss = static_cast<int>(rem % 60);
    std::array<char, 32> buf{};
    const CivilDate c = civil_from_days(day);
    std::snprintf(buf.data(), buf.size(), "%04d-%02u-%02uT%02d:%02d:%02dZ",
                  c.year, c.month, c.day, hh, mm, ss);
    return std::string(buf.data());
}

}  // namespace sentiforge::utc
