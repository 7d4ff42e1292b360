#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cellcast/baselines.hpp"
#include "cellcast/errors.hpp"

using namespace cellcast;

namespace {

// 2021-03-01 is a Monday, so index i has hour-of-day i % 24 and hour-of-week i % 168.
CellSeries make_series(const std::vector<double>& v) {
    CellSeries s;
    s.key = {"C1", Tech::FourG, Indicator::PDSCH};
    s.start = HourStamp::from_date(Date{std::chrono::year{2021} / 3 / 1});
    for (double x : v) s.values.emplace_back(x);
    return s;
}

std::vector<double> random_values(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

// Loop-only oracle for the blended forecast of history index `target`, using
// only indices below `cutoff`.
double oracle_rule(const std::vector<double>& v, std::size_t target, std::size_t cutoff, const RuleParams& p) {
    std::vector<double> s1, s2;
    for (std::size_t i = 0; i < cutoff; ++i) {
        if (i % 24 == target % 24) s1.push_back(v[i]);
        if (i % 168 == target % 168) s2.push_back(v[i]);
    }
    auto es = [](const std::vector<double>& x, double a) {
        double r = 0.0;
        const std::size_t n = x.size();
        for (std::size_t i = 1; i <= n; ++i) {
            r += (i == n ? a : std::pow(1.0 - a, double(n - i))) * x[i - 1];
        }
        return r;
    };
    auto mean = [](std::vector<double> x) {
        double r = 0.0;
        for (double y : x) r += y;
        return r / double(x.size());
    };
    auto median = [](std::vector<double> x) {
        std::sort(x.begin(), x.end());
        const std::size_t n = x.size();
        return n % 2 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
    };
    return p.w[0] * es(s1, p.alpha1) + p.w[1] * es(s2, p.alpha2) + p.w[2] * mean(s1) + p.w[3] * mean(s2) +
           p.w[4] * median(s1) + p.w[5] * median(s2);
}

}  // namespace

TEST(ExpSmooth, HandComputedValues) {
    EXPECT_DOUBLE_EQ(exp_smooth(std::vector<double>{10.0}, 0.82), 8.2);
    // 0.25 * 2 + 0.5 * 4 + 0.5 * 6
    EXPECT_DOUBLE_EQ(exp_smooth(std::vector<double>{2.0, 4.0, 6.0}, 0.5), 5.5);
    EXPECT_DOUBLE_EQ(exp_smooth(std::vector<double>{1.0, 2.0, 3.0}, 1.0), 3.0);
    EXPECT_THROW(exp_smooth(std::vector<double>{}, 0.5), std::invalid_argument);
}

TEST(MeanMedian, OddEvenAndEmpty) {
    EXPECT_DOUBLE_EQ(mean_of(std::vector<double>{1, 2, 6}), 3.0);
    EXPECT_DOUBLE_EQ(median_of(std::vector<double>{9, 1, 5}), 5.0);
    EXPECT_DOUBLE_EQ(median_of(std::vector<double>{4, 1, 3, 10}), 3.5);
    EXPECT_THROW(mean_of(std::vector<double>{}), std::invalid_argument);
    EXPECT_THROW(median_of(std::vector<double>{}), std::invalid_argument);
}

TEST(Naive, RepeatsTheLastWeek) {
    auto v = random_values(3 * 168, 1);
    const auto s = make_series(v);
    const auto f = naive_forecast(s);
    for (std::size_t i = 0; i < 168; ++i) EXPECT_EQ(f[i], v[2 * 168 + i]);
}

TEST(Naive, PeriodicSeriesIsForecastExactly) {
    auto week = random_values(168, 2);
    std::vector<double> v;
    for (int k = 0; k < 4; ++k) v.insert(v.end(), week.begin(), week.end());
    const auto f = naive_forecast(make_series(v));
    for (std::size_t i = 0; i < 168; ++i) EXPECT_EQ(f[i], week[i]);
}

TEST(Naive, ShortOrGappySeriesIsRejected) {
    EXPECT_THROW(naive_forecast(make_series(random_values(100, 3))), ValidationError);
    auto s = make_series(random_values(200, 3));
    s.values[150].reset();
    EXPECT_THROW(naive_forecast(s), ValidationError);
}

TEST(Rule, MatchesLoopOracleOnThreeWeeks) {
    const auto v = random_values(3 * 168, 4);
    const auto s = make_series(v);
    RuleParams p;
    const auto week = rule_based_week(s, p);
    for (std::size_t i = 0; i < 168; ++i) {
        const std::size_t target = v.size() + i;
        EXPECT_NEAR(week[i], oracle_rule(v, target, v.size(), p), 1e-9) << i;
    }
    // Single-hour form uses everything before the target hour.
    for (std::size_t target : {200u, 337u, 503u}) {
        const double got = rule_based_forecast(s, s.start + std::int64_t(target), p);
        EXPECT_NEAR(got, oracle_rule(v, target, target, p), 1e-9) << target;
    }
}

TEST(Rule, NonDefaultParametersMatchOracle) {
    const auto v = random_values(2 * 168 + 30, 5);
    const auto s = make_series(v);
    RuleParams p{0.3, 0.6, {0.5, -0.1, 0.2, 0.1, 0.2, 0.1}};
    const auto week = rule_based_week(s, p);
    for (std::size_t i = 0; i < 168; ++i) EXPECT_NEAR(week[i], oracle_rule(v, v.size() + i, v.size(), p), 1e-9);
}

TEST(Rule, SingleWeightIsolatesEachComponent) {
    const auto v = random_values(3 * 168, 6);
    const auto s = make_series(v);
    const std::size_t target = v.size() + 5;
    std::vector<double> s1, s2;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i % 24 == 5) s1.push_back(v[i]);
        if (i % 168 == 5) s2.push_back(v[i]);
    }
    const double expected[6] = {exp_smooth(s1, 0.82), exp_smooth(s2, 0.82), mean_of(s1),
                                mean_of(s2),          median_of(s1),        median_of(s2)};
    for (int k = 0; k < 6; ++k) {
        RuleParams p;
        p.w = {0, 0, 0, 0, 0, 0};
        p.w[k] = 1.0;
        EXPECT_NEAR(rule_based_forecast(s, s.start + std::int64_t(target), p), expected[k], 1e-12) << k;
    }
}

TEST(Rule, ZeroSeriesGivesZeros) {
    const auto week = rule_based_week(make_series(std::vector<double>(2 * 168, 0.0)));
    for (double x : week) EXPECT_EQ(x, 0.0);
}

TEST(Rule, ForecastWeekNeverSeesForecastPeriodValues) {
    // Values inside the forecast week must not change the weekly forecast.
    auto v = random_values(4 * 168, 7);
    const auto s = make_series(v);
    const HourStamp week_start = s.start + std::int64_t(3 * 168);
    const auto before = rule_based_week(s, week_start, {});
    auto poisoned = s;
    for (std::size_t i = 3 * 168; i < 4 * 168; ++i) poisoned.values[i] = 1e9;
    EXPECT_EQ(rule_based_week(poisoned, week_start, {}), before);
}

TEST(Rule, PositiveHomogeneity) {
    const auto v = random_values(3 * 168, 8);
    auto scaled = v;
    for (auto& x : scaled) x *= 4.0;
    const auto a = rule_based_week(make_series(v));
    const auto b = rule_based_week(make_series(scaled));
    for (std::size_t i = 0; i < 168; ++i) EXPECT_NEAR(b[i], 4.0 * a[i], 1e-9 * std::fabs(a[i]) + 1e-12);
}

TEST(Rule, InvalidParametersAndMissingHistoryAreRejected) {
    const auto s = make_series(random_values(3 * 168, 9));
    RuleParams p;
    p.alpha1 = 0.0;
    EXPECT_THROW(rule_based_week(s, p), ValidationError);
    p = {};
    p.w[2] = std::nan("");
    EXPECT_THROW(rule_based_week(s, p), ValidationError);
    auto gappy = s;
    gappy.values[10].reset();
    EXPECT_THROW(rule_based_week(gappy), ValidationError);
    EXPECT_THROW(rule_based_forecast(s, s.start + std::int64_t(3)), ValidationError);
}
