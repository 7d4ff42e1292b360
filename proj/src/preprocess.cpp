#include "cellcast/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "cellcast/errors.hpp"
#include "cellcast/textio.hpp"

namespace cellcast {

std::array<double, kInputWidth> SampleRow::input() const {
    std::array<double, kInputWidth> in{};
    std::copy(holiday_flags.begin(), holiday_flags.end(), in.begin());
    std::copy(scaled_history.begin(), scaled_history.end(), in.begin() + kHolidayFlags);
    return in;
}

Horizon SampleRow::scaled_target() const {
    if (!target) throw std::logic_error("sample row has no target");
    Horizon out{};
    for (std::size_t i = 0; i < kHorizonHours; ++i) out[i] = (*target)[i] / scale;
    return out;
}

CellSeries impute(const CellSeries& series) {
    CellSeries out = series;
    const auto n = static_cast<std::int64_t>(series.values.size());
    for (std::int64_t i = 0; i < n; ++i) {
        if (series.values[i]) continue;
        double weighted = 0.0;
        double weights = 0.0;
        for (std::int64_t k = 1;; ++k) {
            const std::int64_t before = i - k * kHoursPerWeek;
            const std::int64_t after = i + k * kHoursPerWeek;
            if (before < 0 && after >= n) break;
            const double w = 1.0 / static_cast<double>(k);
            if (before >= 0 && series.values[before]) {
                weighted += w * *series.values[before];
                weights += w;
            }
            if (after < n && series.values[after]) {
                weighted += w * *series.values[after];
                weights += w;
            }
        }
        if (weights == 0.0) {
            throw ImputationError("no same-hour-of-week value to impute " + series.key.cell_id + " " +
                                  std::string(to_string(series.key.indicator)) + " at " +
                                  format_hour_stamp(series.start + i));
        }
        out.values[i] = weighted / weights;
    }
    return out;
}

HolidayFlags holiday_vector(const HolidayCalendar& calendar, Date window_start) {
    HolidayFlags flags{};
    for (std::size_t i = 0; i < kHolidayFlags; ++i) {
        flags[i] = calendar.is_holiday(window_start + std::chrono::days{static_cast<int>(i)}) ? 1 : 0;
    }
    return flags;
}

ScaledRow scale_row(std::span<const double, kHistoryHours> history,
                    std::optional<std::span<const double, kHorizonHours>> target) {
    ScaledRow out;
    const double sum = std::accumulate(history.begin(), history.end(), 0.0);
    out.scale = sum / static_cast<double>(kHistoryHours);
    if (!(out.scale > 0.0)) throw DegenerateRowError("history mean is zero");
    for (std::size_t i = 0; i < kHistoryHours; ++i) out.scaled_history[i] = history[i] / out.scale;
    if (target) {
        Horizon t{};
        for (std::size_t i = 0; i < kHorizonHours; ++i) t[i] = (*target)[i] / out.scale;
        out.scaled_target = t;
    }
    return out;
}

Horizon unscale(std::span<const double, kHorizonHours> scaled_output, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("unscale: scale must be positive");
    Horizon out{};
    for (std::size_t i = 0; i < kHorizonHours; ++i) out[i] = scaled_output[i] * scale;
    return out;
}

namespace {

void require_day_aligned(const CellSeries& series) {
    if (series.start.hour_of_day() != 0) {
        throw ValidationError("series " + series.key.cell_id + " does not start at hour 0");
    }
}

std::optional<SampleRow> make_row(const CellSeries& series, const std::vector<double>& values,
                                  const HolidayCalendar& calendar, std::size_t first_hour, bool with_target) {
    const std::span<const double> all(values);
    const auto history = all.subspan(first_hour).first<kHistoryHours>();
    std::optional<std::span<const double, kHorizonHours>> target;
    if (with_target) target = all.subspan(first_hour + kHistoryHours).first<kHorizonHours>();

    ScaledRow scaled;
    try {
        scaled = scale_row(history, target);
    } catch (const DegenerateRowError&) {
        return std::nullopt;
    }
    SampleRow row;
    row.origin = RowOrigin{series.key, series.start + static_cast<std::int64_t>(first_hour)};
    row.holiday_flags = holiday_vector(calendar, row.origin.window_start.date());
    row.scaled_history = scaled.scaled_history;
    row.scale = scaled.scale;
    if (target) {
        Horizon t{};
        std::copy(target->begin(), target->end(), t.begin());
        row.target = t;
    }
    return row;
}

}  // namespace

std::vector<SampleRow> extract_windows(const CellSeries& series, const HolidayCalendar& calendar,
                                       const WindowOptions& options) {
    if (options.stride_days == 0) throw std::invalid_argument("stride_days must be positive");
    require_day_aligned(series);
    const auto values = series.dense_values();

    const std::size_t span_hours = options.with_targets ? kWindowDays * 24 : kHistoryHours;
    const std::size_t stride_hours = options.stride_days * 24;
    std::vector<SampleRow> rows;
    for (std::size_t first = 0; first + span_hours <= values.size(); first += stride_hours) {
        if (auto row = make_row(series, values, calendar, first, options.with_targets)) rows.push_back(std::move(*row));
    }
    if (options.max_rows && rows.size() > *options.max_rows) {
        rows.erase(rows.begin(), rows.end() - static_cast<std::ptrdiff_t>(*options.max_rows));
    }
    return rows;
}

std::optional<SampleRow> forecast_row(const CellSeries& series, const HolidayCalendar& calendar) {
    require_day_aligned(series);
    if (series.values.size() % 24 != 0) {
        throw ValidationError("series " + series.key.cell_id + " does not end on a day boundary");
    }
    if (series.values.size() < kHistoryHours) {
        throw ValidationError("series " + series.key.cell_id + " is shorter than 21 days");
    }
    const auto values = series.dense_values();
    return make_row(series, values, calendar, values.size() - kHistoryHours, false);
}

void write_feature_csv(std::ostream& out, const std::vector<SampleRow>& rows) {
    const bool with_targets = !rows.empty() && rows.front().target.has_value();
    out << "cell_id,indicator,tech,window_start,scale";
    for (std::size_t i = 1; i <= kHolidayFlags; ++i) out << ",h" << i;
    for (std::size_t i = 1; i <= kHistoryHours; ++i) out << ",x" << i;
    if (with_targets) {
        for (std::size_t i = 1; i <= kHorizonHours; ++i) out << ",y" << i;
    }
    out << '\n';
    for (const auto& r : rows) {
        if (r.target.has_value() != with_targets) {
            throw std::invalid_argument("feature rows must all have targets or none");
        }
        out << r.origin.key.cell_id << ',' << to_string(r.origin.key.indicator) << ',' << to_string(r.origin.key.tech)
            << ',' << format_hour_stamp(r.origin.window_start) << ',' << format_double(r.scale);
        for (auto f : r.holiday_flags) out << ',' << int{f};
        for (double x : r.scaled_history) out << ',' << format_double(x);
        if (r.target) {
            for (double y : *r.target) out << ',' << format_double(y);
        }
        out << '\n';
    }
}

std::vector<SampleRow> read_feature_csv(std::istream& in) {
    constexpr std::size_t kFixed = 5;
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) throw ParseError("missing header", 1);
    strip_cr(line);
    const auto header = split_csv(line);
    const bool with_targets = header.size() == kFixed + kInputWidth + kHorizonHours;
    if ((header.size() != kFixed + kInputWidth && !with_targets) || header[0] != "cell_id" ||
        header[4] != "scale") {
        throw ParseError("unexpected feature header", 1);
    }

    std::vector<SampleRow> rows;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty()) continue;
        const auto cols = split_csv(line);
        if (cols.size() != header.size()) throw ParseError("wrong column count", line_no);

        SampleRow r;
        r.origin.key.cell_id = cols[0];
        const auto ind = parse_indicator(cols[1]);
        const auto tech = parse_tech(cols[2]);
        if (!ind || !tech) throw ParseError("unknown indicator or tech", line_no);
        r.origin.key.indicator = *ind;
        r.origin.key.tech = *tech;
        if (!parse_hour_stamp(cols[3], r.origin.window_start)) throw ParseError("malformed window_start", line_no);
        if (!parse_double(cols[4], r.scale) || !(r.scale > 0.0) || !std::isfinite(r.scale)) {
            throw ParseError("scale must be a positive number", line_no);
        }
        std::size_t c = kFixed;
        for (auto& f : r.holiday_flags) {
            if (cols[c] != "0" && cols[c] != "1") throw ParseError("holiday flag must be 0 or 1", line_no);
            f = cols[c++] == "1" ? 1 : 0;
        }
        auto read_block = [&](auto& arr) {
            for (auto& v : arr) {
                if (!parse_double(cols[c], v) || !std::isfinite(v) || v < 0.0) {
                    throw ParseError("bad value in column " + std::to_string(c + 1), line_no);
                }
                ++c;
            }
        };
        read_block(r.scaled_history);
        if (with_targets) {
            Horizon t{};
            read_block(t);
            r.target = t;
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<SampleRow> read_feature_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open feature file " + path.string());
    return read_feature_csv(in);
}

}  // namespace cellcast
