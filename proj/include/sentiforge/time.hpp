// UTC time helpers.
//
// Everything downstream runs on whole UTC seconds; hourly data additionally
// requires minute and second to be zero. Timestamps parse from and format to
// ISO-8601 ("2018-01-01T00:00:00Z"); a space separator and a missing zone
// suffix are accepted on input since exchange dumps commonly use them.

#ifndef SENTIFORGE_TIME_HPP
#define SENTIFORGE_TIME_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace sentiforge::utc {

inline constexpr std::int64_t kSecondsPerHour = 3600;
inline constexpr std::int64_t kSecondsPerDay = 86400;
inline constexpr std::int64_t kHoursPerDay = 24;

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(int year, unsigned month, unsigned day);

struct CivilDate {
    int year;
    unsigned month;  // 1..12
    unsigned day;    // 1..31
};

CivilDate civil_from_days(std::int64_t days);

// Epoch seconds for a civil date-time.
std::int64_t to_epoch(int year, unsigned month, unsigned day,
                      unsigned hour = 0, unsigned minute = 0, unsigned second = 0);

// "YYYY-MM-DD" -> days since epoch. Throws DataError on malformed input.
std::int64_t parse_day(std::string_view text);

// "YYYY-MM-DD[T ]HH:MM:SS[Z]" or bare "YYYY-MM-DD" -> epoch seconds.
std::int64_t parse_timestamp(std::string_view text);

std::string format_day(std::int64_t days_since_epoch);
std::string format_timestamp(std::int64_t epoch_seconds);

inline bool is_hour_aligned(std::int64_t epoch_seconds) {
    return epoch_seconds % kSecondsPerHour == 0;
}

inline std::int64_t floor_hour(std::int64_t epoch_seconds) {
    std::int64_t h = epoch_seconds / kSecondsPerHour;
    if (epoch_seconds % kSecondsPerHour < 0) --h;  // negative epochs round down
    return h * kSecondsPerHour;
}

inline std::int64_t day_of(std::int64_t epoch_seconds) {
    std::int64_t d = epoch_seconds / kSecondsPerDay;
    if (epoch_seconds % kSecondsPerDay < 0) --d;
    return d;
}

}  // namespace sentiforge::utc

#endif  // SENTIFORGE_TIME_HPP
