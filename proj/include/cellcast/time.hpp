#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace cellcast {

using Date = std::chrono::sys_days;

inline constexpr std::int64_t kHoursPerDay = 24;
inline constexpr std::int64_t kHoursPerWeek = 168;

// Naive local wall-clock hour, counted from 1970-01-01T00:00. No zone or DST
// arithmetic is ever applied.
struct HourStamp {
    std::int64_t hours = 0;

    static HourStamp from_date(Date d, int hour = 0) {
        return HourStamp{static_cast<std::int64_t>(d.time_since_epoch().count()) * kHoursPerDay + hour};
    }

    Date date() const;
    int hour_of_day() const;
    // 0..167, Monday 00:00 = 0.
    int hour_of_week() const;

    HourStamp operator+(std::int64_t h) const { return HourStamp{hours + h}; }
    HourStamp operator-(std::int64_t h) const { return HourStamp{hours - h}; }
    std::int64_t operator-(HourStamp o) const { return hours - o.hours; }
    auto operator<=>(const HourStamp&) const = default;
};

// Strict parsers; they return false on any syntax or calendar error.
bool parse_date(std::string_view text, Date& out);
bool parse_hour_stamp(std::string_view text, HourStamp& out);

std::string format_date(Date d);
// YYYY-MM-DDTHH:00
std::string format_hour_stamp(HourStamp t);

}  // namespace cellcast
