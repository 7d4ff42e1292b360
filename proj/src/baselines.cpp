#include "cellcast/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "cellcast/errors.hpp"

namespace cellcast {

Horizon naive_forecast(const CellSeries& series) {
    if (series.values.size() < kHorizonHours) {
        throw ValidationError("series " + series.key.cell_id + " is shorter than one week");
    }
    Horizon out{};
    const std::size_t first = series.values.size() - kHorizonHours;
    for (std::size_t i = 0; i < kHorizonHours; ++i) {
        const auto& v = series.values[first + i];
        if (!v) throw ValidationError("series " + series.key.cell_id + " has missing values in its last week");
        out[i] = *v;
    }
    return out;
}

double exp_smooth(std::span<const double> x, double alpha) {
    if (x.empty()) throw std::invalid_argument("exp_smooth of an empty sequence");
    const std::size_t n = x.size();
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        sum += std::pow(1.0 - alpha, static_cast<double>(n - 1 - i)) * x[i];
    }
    return sum + alpha * x[n - 1];
}

double mean_of(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("mean of an empty sequence");
    double sum = 0.0;
    for (double v : x) sum += v;
    return sum / static_cast<double>(x.size());
}

double median_of(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("median of an empty sequence");
    std::vector<double> s(x.begin(), x.end());
    std::sort(s.begin(), s.end());
    const std::size_t mid = s.size() / 2;
    return s.size() % 2 == 1 ? s[mid] : (s[mid - 1] + s[mid]) / 2.0;
}

void RuleParams::validate() const {
    auto ok_alpha = [](double a) { return a > 0.0 && a <= 1.0; };
    if (!ok_alpha(alpha1) || !ok_alpha(alpha2)) throw ValidationError("smoothing parameters must lie in (0, 1]");
    for (double v : w) {
        if (!std::isfinite(v)) throw ValidationError("rule weights must be finite");
    }
}

namespace {

double rule_blend(const CellSeries& series, HourStamp target, HourStamp history_end, const RuleParams& params) {
    std::vector<double> same_hour;
    std::vector<double> same_week_hour;
    const int hod = target.hour_of_day();
    const int how = target.hour_of_week();
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        const HourStamp t = series.start + static_cast<std::int64_t>(i);
        if (t >= history_end) break;
        if (t.hour_of_day() != hod) continue;
        const auto& v = series.values[i];
        if (!v) throw ValidationError("series " + series.key.cell_id + " has missing values; impute first");
        same_hour.push_back(*v);
        if (t.hour_of_week() == how) same_week_hour.push_back(*v);
    }
    if (same_hour.empty() || same_week_hour.empty()) {
        throw ValidationError("no history at the same hour of day/week before " + format_hour_stamp(target));
    }
    const auto& w = params.w;
    return w[0] * exp_smooth(same_hour, params.alpha1) + w[1] * exp_smooth(same_week_hour, params.alpha2) +
           w[2] * mean_of(same_hour) + w[3] * mean_of(same_week_hour) + w[4] * median_of(same_hour) +
           w[5] * median_of(same_week_hour);
}

}  // namespace

double rule_based_forecast(const CellSeries& series, HourStamp target, const RuleParams& params) {
    params.validate();
    return rule_blend(series, target, target, params);
}

Horizon rule_based_week(const CellSeries& series, const RuleParams& params) {
    return rule_based_week(series, series.end(), params);
}

Horizon rule_based_week(const CellSeries& series, HourStamp week_start, const RuleParams& params) {
    params.validate();
    Horizon out{};
    for (std::size_t i = 0; i < kHorizonHours; ++i) {
        out[i] = rule_blend(series, week_start + static_cast<std::int64_t>(i), week_start, params);
    }
    return out;
}

}  // namespace cellcast
