#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "cellcast/ingest.hpp"
#include "cellcast/preprocess.hpp"

namespace cellcast {

// 168-hour forecasts (or actuals) for many series, all for the same week.
struct ForecastGrid {
    HourStamp week_start;
    std::map<SeriesKey, Horizon> entries;

    bool operator==(const ForecastGrid&) const = default;
};

inline constexpr double kWeight4G = 0.7;
inline constexpr double kWeight5G = 0.3;
inline constexpr double kFirstDayWeight = 1.2;
inline constexpr double kLaterDayWeight = 1.0;

double hour_weight(std::size_t hour_index);

struct BreakdownRow {
    Tech tech;
    Indicator indicator;
    double mape = 0.0;
    std::size_t n_points = 0;
};

// MAPEs are fractions, not percentages. A tech without entries has no MAPE
// and the other tech then carries the full weight.
struct EvalReport {
    std::optional<double> mape_4g;
    std::optional<double> mape_5g;
    double weighted_mape = 0.0;
    std::size_t n_points_scored = 0;
    std::size_t n_points_skipped_zero_actual = 0;
    std::vector<BreakdownRow> breakdown;
};

// Day-weighted MAPE pooled over all (cell, indicator, hour) points of each
// tech, combined 0.7 / 0.3 across 4G and 5G. Points with a zero actual value
// are skipped and counted.
EvalReport weighted_mape(const ForecastGrid& pred, const ForecastGrid& actual);

void write_grid_csv(std::ostream& out, const ForecastGrid& grid);
ForecastGrid read_grid_csv(std::istream& in);
ForecastGrid read_grid_csv(const std::filesystem::path& path);

// tech,indicator,mape,n_points
void write_breakdown_csv(std::ostream& out, const EvalReport& report);

EvalReport evaluate_run(const std::filesystem::path& pred_path, const std::filesystem::path& actual_path,
                        const std::optional<std::filesystem::path>& breakdown_path = std::nullopt);

}  // namespace cellcast
