#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cellcast/time.hpp"

namespace cellcast {

enum class Tech { FourG, FiveG };

enum class Indicator { PUSCH, PDSCH, PDCCH, RRC, PDCPUL, PDCPDL };

inline constexpr Indicator kAllIndicators[] = {Indicator::PUSCH, Indicator::PDSCH,  Indicator::PDCCH,
                                               Indicator::RRC,   Indicator::PDCPUL, Indicator::PDCPDL};

std::string_view to_string(Tech t);
std::string_view to_string(Indicator i);
std::optional<Tech> parse_tech(std::string_view s);
std::optional<Indicator> parse_indicator(std::string_view s);

// Identifies one cell x indicator stream.
struct SeriesKey {
    std::string cell_id;
    Tech tech = Tech::FourG;
    Indicator indicator = Indicator::PUSCH;

    auto operator<=>(const SeriesKey&) const = default;
};

// Hourly-contiguous series: values[i] is the reading at start + i hours.
// A disengaged optional marks a missing point.
struct CellSeries {
    SeriesKey key;
    std::string city;  // optional metadata, unused by the pipeline
    HourStamp start;
    std::vector<std::optional<double>> values;

    HourStamp end() const { return start + static_cast<std::int64_t>(values.size()); }
    std::size_t missing_count() const;
    bool complete() const { return missing_count() == 0; }

    // Present values only; throws ValidationError if any point is missing.
    std::vector<double> dense_values() const;

    bool operator==(const CellSeries&) const = default;
};

class HolidayCalendar {
public:
    HolidayCalendar() = default;
    explicit HolidayCalendar(std::set<Date> days) : days_(std::move(days)) {}

    bool is_holiday(Date d) const { return days_.count(d) != 0; }
    void add(Date d) { days_.insert(d); }
    const std::set<Date>& days() const { return days_; }

private:
    std::set<Date> days_;
};

std::vector<CellSeries> parse_series_csv(std::istream& in);
std::vector<CellSeries> parse_series_csv(const std::filesystem::path& path);

// Rows are emitted chronologically; missing points get an empty value column.
void write_series_csv(std::ostream& out, const std::vector<CellSeries>& series);

HolidayCalendar parse_holidays(std::istream& in);
HolidayCalendar parse_holidays(const std::filesystem::path& path);
void write_holidays(std::ostream& out, const HolidayCalendar& calendar);

}  // namespace cellcast
