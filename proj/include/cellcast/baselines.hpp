#pragma once

#include <span>

#include "cellcast/ingest.hpp"
#include "cellcast/preprocess.hpp"

namespace cellcast {

// Repeats the last observed week.
Horizon naive_forecast(const CellSeries& series);

// sum_{i=1}^{n-1} (1 - alpha)^(n - i) x_i + alpha x_n, taken literally: the
// history weights carry no alpha factor, so they do not sum to one.
double exp_smooth(std::span<const double> x, double alpha);

double mean_of(std::span<const double> x);
// Mean of the two central values for even lengths.
double median_of(std::span<const double> x);

struct RuleParams {
    double alpha1 = 0.82;
    double alpha2 = 0.82;
    std::array<double, 6> w{0.07, 0.13, 0.14, 0.26, 0.14, 0.26};

    void validate() const;
};

// Weighted blend of exponential smoothing, mean and median over two
// sub-series of the history before `target`: values at the same hour of day
// and values at the same hour of week.
double rule_based_forecast(const CellSeries& series, HourStamp target, const RuleParams& params = {});

// rule_based_forecast for each hour of the week starting at `week_start`
// (default: right after the series). Forecast hours never feed each other.
Horizon rule_based_week(const CellSeries& series, const RuleParams& params = {});
Horizon rule_based_week(const CellSeries& series, HourStamp week_start, const RuleParams& params = {});

}  // namespace cellcast
