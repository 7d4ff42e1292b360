#include "cellcast/time.hpp"

#include <charconv>
#include <cstdio>

namespace cellcast {

namespace {

bool parse_fixed_int(std::string_view text, int& out) {
    if (text.empty()) return false;
    for (char c : text) {
        if (c < '0' || c > '9') return false;
    }
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
    const std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

std::int64_t floor_div(std::int64_t a, std::int64_t m) {
    return (a - floor_mod(a, m)) / m;
}

}  // namespace

Date HourStamp::date() const {
    return Date{std::chrono::days{floor_div(hours, kHoursPerDay)}};
}

int HourStamp::hour_of_day() const {
    return static_cast<int>(floor_mod(hours, kHoursPerDay));
}

int HourStamp::hour_of_week() const {
    // 1970-01-01 was a Thursday, three days after the Monday origin.
    return static_cast<int>(floor_mod(hours + 3 * kHoursPerDay, kHoursPerWeek));
}

bool parse_date(std::string_view text, Date& out) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return false;
    int y = 0, m = 0, d = 0;
    if (!parse_fixed_int(text.substr(0, 4), y) || !parse_fixed_int(text.substr(5, 2), m) ||
        !parse_fixed_int(text.substr(8, 2), d)) {
        return false;
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return false;
    out = Date{ymd};
    return true;
}

bool parse_hour_stamp(std::string_view text, HourStamp& out) {
    // YYYY-MM-DDTHH:00 (a trailing ":00" seconds field is tolerated).
    if (text.size() == 19 && text.substr(16) == ":00") text = text.substr(0, 16);
    if (text.size() != 16 || (text[10] != 'T' && text[10] != ' ') || text[13] != ':') return false;
    Date d;
    if (!parse_date(text.substr(0, 10), d)) return false;
    int h = 0, mi = 0;
    if (!parse_fixed_int(text.substr(11, 2), h) || !parse_fixed_int(text.substr(14, 2), mi)) return false;
    if (h > 23 || mi != 0) return false;
    out = HourStamp::from_date(d, h);
    return true;
}

std::string format_date(Date d) {
    const std::chrono::year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::string format_hour_stamp(HourStamp t) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "T%02d:00", t.hour_of_day());
    return format_date(t.date()) + buf;
}

}  // namespace cellcast
