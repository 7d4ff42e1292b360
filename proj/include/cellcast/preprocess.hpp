#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "cellcast/ingest.hpp"

namespace cellcast {

inline constexpr std::size_t kWindowDays = 28;
inline constexpr std::size_t kHistoryDays = 21;
inline constexpr std::size_t kHolidayFlags = kWindowDays;
inline constexpr std::size_t kHistoryHours = kHistoryDays * 24;                // 504
inline constexpr std::size_t kHorizonHours = (kWindowDays - kHistoryDays) * 24;  // 168
inline constexpr std::size_t kInputWidth = kHolidayFlags + kHistoryHours;      // 532

using HolidayFlags = std::array<std::uint8_t, kHolidayFlags>;
using History = std::array<double, kHistoryHours>;
using Horizon = std::array<double, kHorizonHours>;

struct RowOrigin {
    SeriesKey key;
    HourStamp window_start;

    bool operator==(const RowOrigin&) const = default;
};

// One model row. The history is stored scaled; the target is kept in the
// original units and divided by `scale` on demand.
struct SampleRow {
    HolidayFlags holiday_flags{};
    History scaled_history{};
    double scale = 1.0;
    std::optional<Horizon> target;
    RowOrigin origin;

    // Network input: 28 holiday flags followed by the scaled history.
    std::array<double, kInputWidth> input() const;
    Horizon scaled_target() const;

    bool operator==(const SampleRow&) const = default;
};

// Fills every missing point from the originally present values at the same
// hour of week, k weeks away in either direction, weighted 1/k. Throws
// ImputationError when a missing point has no such neighbour.
CellSeries impute(const CellSeries& series);

HolidayFlags holiday_vector(const HolidayCalendar& calendar, Date window_start);

struct ScaledRow {
    History scaled_history{};
    double scale = 0.0;
    std::optional<Horizon> scaled_target;
};

// Throws DegenerateRowError when the history mean is zero.
ScaledRow scale_row(std::span<const double, kHistoryHours> history,
                    std::optional<std::span<const double, kHorizonHours>> target = std::nullopt);

Horizon unscale(std::span<const double, kHorizonHours> scaled_output, double scale);

struct WindowOptions {
    std::size_t stride_days = 1;
    bool with_targets = true;
    // Keep only the most recent windows when set.
    std::optional<std::size_t> max_rows;
};

// Sliding 28-day windows (21 when targets are not wanted) over a complete,
// day-aligned series. Zero-mean histories are skipped.
std::vector<SampleRow> extract_windows(const CellSeries& series, const HolidayCalendar& calendar,
                                       const WindowOptions& options = {});

// The inference row for the week immediately following the series: history
// is the last 21 days, holiday flags also cover the forecast week. Returns
// nullopt for a zero-mean history.
std::optional<SampleRow> forecast_row(const CellSeries& series, const HolidayCalendar& calendar);

void write_feature_csv(std::ostream& out, const std::vector<SampleRow>& rows);
std::vector<SampleRow> read_feature_csv(std::istream& in);
std::vector<SampleRow> read_feature_csv(const std::filesystem::path& path);

}  // namespace cellcast
