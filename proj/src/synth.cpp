#include "cellcast/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include "cellcast/errors.hpp"
#include "cellcast/textio.hpp"

namespace cellcast {

void SynthConfig::validate() const {
    if (n_days < kWindowDays + 7) {
        throw ValidationError("n_days must be at least 35 (one training window plus a held-out week)");
    }
    if (n_cells_4g + n_cells_5g == 0) throw ValidationError("at least one cell is required");
    if (indicators.empty()) throw ValidationError("at least one indicator is required");
    if (!(base_level > daily_amp + weekly_amp)) throw ValidationError("base_level must exceed daily_amp + weekly_amp");
    if (daily_amp < 0.0 || weekly_amp < 0.0 || !(noise_sd >= 0.0)) {
        throw ValidationError("amplitudes and noise_sd must be non-negative");
    }
    if (!(missing_rate >= 0.0 && missing_rate < 1.0)) throw ValidationError("missing_rate must lie in [0, 1)");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t sub_seed(std::uint64_t seed, Tech tech, std::size_t cell, Indicator ind) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ (tech == Tech::FourG ? 4u : 5u));
    h = splitmix64(h ^ cell);
    return splitmix64(h ^ static_cast<std::uint64_t>(ind));
}

std::string cell_name(Tech tech, std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s-%04zu", tech == Tech::FourG ? "L" : "N", index);
    return buf;
}

}  // namespace

SynthCorpus generate(const SynthConfig& config) {
    config.validate();
    SynthCorpus corpus;
    for (Date d : config.holiday_dates) corpus.holidays.add(d);

    const HourStamp start = HourStamp::from_date(config.start);
    const std::size_t train_hours = (config.n_days - 7) * 24;
    const std::size_t total_hours = config.n_days * 24;
    corpus.actual.week_start = start + static_cast<std::int64_t>(train_hours);
    constexpr double two_pi = 2.0 * std::numbers::pi;

    for (Tech tech : {Tech::FourG, Tech::FiveG}) {
        const std::size_t n_cells = tech == Tech::FourG ? config.n_cells_4g : config.n_cells_5g;
        for (std::size_t c = 0; c < n_cells; ++c) {
            for (Indicator ind : config.indicators) {
                std::mt19937_64 rng(sub_seed(config.seed, tech, c, ind));
                std::uniform_real_distribution<double> phase(0.0, two_pi);
                const double daily_phase = phase(rng);
                const double weekly_phase = phase(rng);
                std::normal_distribution<double> noise(0.0, 1.0);
                std::bernoulli_distribution drop(config.missing_rate);

                std::vector<double> raw(total_hours);
                std::vector<bool> masked(train_hours);
                for (std::size_t i = 0; i < total_hours; ++i) {
                    const HourStamp t = start + static_cast<std::int64_t>(i);
                    double v = config.base_level +
                               config.daily_amp * std::sin(two_pi * t.hour_of_day() / 24.0 + daily_phase) +
                               config.weekly_amp * std::sin(two_pi * t.hour_of_week() / 168.0 + weekly_phase);
                    if (corpus.holidays.is_holiday(t.date())) v += config.holiday_dip;
                    v += config.noise_sd * noise(rng);
                    raw[i] = std::max(0.0, v);
                    if (i < train_hours) masked[i] = drop(rng);
                }
                // Keep at least one reading per hour-of-week slot so every
                // training series stays imputable.
                for (std::size_t slot = 0; slot < std::min<std::size_t>(kHoursPerWeek, train_hours); ++slot) {
                    std::size_t last = slot;
                    bool any = false;
                    for (std::size_t i = slot; i < train_hours; i += kHoursPerWeek) {
                        any = any || !masked[i];
                        last = i;
                    }
                    if (!any) masked[last] = false;
                }

                CellSeries s;
                s.key = SeriesKey{cell_name(tech, c), tech, ind};
                s.start = start;
                s.values.resize(train_hours);
                for (std::size_t i = 0; i < train_hours; ++i) {
                    if (!masked[i]) s.values[i] = raw[i];
                }
                Horizon held_out{};
                std::copy(raw.begin() + static_cast<std::ptrdiff_t>(train_hours), raw.end(), held_out.begin());
                corpus.actual.entries[s.key] = held_out;
                corpus.training.push_back(std::move(s));
            }
        }
    }
    return corpus;
}

SynthPaths write_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    SynthPaths p{dir / "series.csv", dir / "holidays.txt", dir / "actual.csv"};
    atomic_write(p.series, [&](std::ostream& out) { write_series_csv(out, corpus.training); });
    atomic_write(p.holidays, [&](std::ostream& out) { write_holidays(out, corpus.holidays); });
    atomic_write(p.actual, [&](std::ostream& out) { write_grid_csv(out, corpus.actual); });
    return p;
}

}  // namespace cellcast
