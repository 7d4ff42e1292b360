#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "cellcast/eval.hpp"
#include "cellcast/ingest.hpp"

namespace cellcast {

// Sinusoidal daily + weekly profile with Gaussian noise, a level shift on
// holidays, and randomly dropped training points. Amplitudes are arbitrary
// documented defaults, not measured traffic statistics.
struct SynthConfig {
    std::size_t n_cells_4g = 50;
    std::size_t n_cells_5g = 10;
    std::size_t n_days = 42;
    Date start = Date{std::chrono::year{2021} / 3 / 1};
    std::vector<Indicator> indicators{Indicator::PDSCH};
    double base_level = 100.0;
    double daily_amp = 40.0;
    double weekly_amp = 15.0;
    double noise_sd = 8.0;
    double holiday_dip = -25.0;
    double missing_rate = 0.02;
    std::vector<Date> holiday_dates{Date{std::chrono::year{2021} / 3 / 10}};
    std::uint64_t seed = 7;

    void validate() const;
};

struct SynthCorpus {
    // First n_days - 7 days, with missing points.
    std::vector<CellSeries> training;
    HolidayCalendar holidays;
    // The held-out final week.
    ForecastGrid actual;
};

SynthCorpus generate(const SynthConfig& config);

struct SynthPaths {
    std::filesystem::path series;
    std::filesystem::path holidays;
    std::filesystem::path actual;
};

// Writes series.csv, holidays.txt and actual.csv into `dir`.
SynthPaths write_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir);

}  // namespace cellcast
