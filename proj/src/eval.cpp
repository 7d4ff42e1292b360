#include "cellcast/eval.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <string>

#include "cellcast/errors.hpp"
#include "cellcast/textio.hpp"

namespace cellcast {

double hour_weight(std::size_t hour_index) {
    return hour_index < 24 ? kFirstDayWeight : kLaterDayWeight;
}

namespace {

std::string describe(const SeriesKey& k) {
    return k.cell_id + "/" + std::string(to_string(k.tech)) + "/" + std::string(to_string(k.indicator));
}

struct Accumulator {
    double weighted_ape = 0.0;
    double weight = 0.0;
    std::size_t n = 0;

    double mape() const { return weighted_ape / weight; }
};

}  // namespace

EvalReport weighted_mape(const ForecastGrid& pred, const ForecastGrid& actual) {
    if (pred.week_start != actual.week_start) {
        throw ValidationError("week start mismatch: " + format_hour_stamp(pred.week_start) + " vs " +
                              format_hour_stamp(actual.week_start));
    }
    std::string missing;
    for (const auto& [k, _] : actual.entries) {
        if (!pred.entries.count(k)) missing += " " + describe(k) + " (no forecast)";
    }
    for (const auto& [k, _] : pred.entries) {
        if (!actual.entries.count(k)) missing += " " + describe(k) + " (no actual)";
    }
    if (!missing.empty()) throw ValidationError("key mismatch:" + missing);

    EvalReport report;
    std::map<Tech, Accumulator> per_tech;
    std::map<std::pair<Tech, Indicator>, Accumulator> per_group;
    for (const auto& [key, truth] : actual.entries) {
        const auto& guess = pred.entries.at(key);
        auto& tech_acc = per_tech[key.tech];
        auto& group_acc = per_group[{key.tech, key.indicator}];
        for (std::size_t h = 0; h < kHorizonHours; ++h) {
            if (truth[h] == 0.0) {
                ++report.n_points_skipped_zero_actual;
                continue;
            }
            const double ape = std::abs(truth[h] - guess[h]) / truth[h];
            const double w = hour_weight(h);
            for (auto* acc : {&tech_acc, &group_acc}) {
                acc->weighted_ape += w * ape;
                acc->weight += w;
                ++acc->n;
            }
            ++report.n_points_scored;
        }
    }
    if (report.n_points_scored == 0) throw ValidationError("every actual value is zero; MAPE is undefined");

    auto tech_mape = [&](Tech t) -> std::optional<double> {
        const auto it = per_tech.find(t);
        if (it == per_tech.end() || it->second.n == 0) return std::nullopt;
        return it->second.mape();
    };
    report.mape_4g = tech_mape(Tech::FourG);
    report.mape_5g = tech_mape(Tech::FiveG);
    if (report.mape_4g && report.mape_5g) {
        report.weighted_mape = kWeight4G * *report.mape_4g + kWeight5G * *report.mape_5g;
    } else {
        report.weighted_mape = report.mape_4g ? *report.mape_4g : *report.mape_5g;
    }
    for (const auto& [group, acc] : per_group) {
        if (acc.n == 0) continue;
        report.breakdown.push_back({group.first, group.second, acc.mape(), acc.n});
    }
    return report;
}

void write_grid_csv(std::ostream& out, const ForecastGrid& grid) {
    out << "# week_start=" << format_hour_stamp(grid.week_start) << '\n';
    out << "cell_id,tech,indicator,hour_index,value\n";
    for (const auto& [k, values] : grid.entries) {
        for (std::size_t h = 0; h < kHorizonHours; ++h) {
            out << k.cell_id << ',' << to_string(k.tech) << ',' << to_string(k.indicator) << ',' << h << ','
                << format_double(values[h]) << '\n';
        }
    }
}

ForecastGrid read_grid_csv(std::istream& in) {
    ForecastGrid grid;
    std::string line;
    std::size_t line_no = 0;
    bool have_start = false;
    bool have_header = false;
    std::map<SeriesKey, std::set<std::size_t>> seen;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto body = trim(std::string_view(line).substr(1));
            constexpr std::string_view tag = "week_start=";
            if (body.substr(0, tag.size()) == tag) {
                if (!parse_hour_stamp(trim(body.substr(tag.size())), grid.week_start)) {
                    throw ParseError("malformed week_start", line_no);
                }
                have_start = true;
            }
            continue;
        }
        if (!have_header) {
            if (line != "cell_id,tech,indicator,hour_index,value") {
                throw ParseError("expected header cell_id,tech,indicator,hour_index,value", line_no);
            }
            have_header = true;
            continue;
        }
        const auto cols = split_csv(line);
        if (cols.size() != 5) throw ParseError("expected 5 columns", line_no);
        const auto tech = parse_tech(cols[1]);
        const auto ind = parse_indicator(cols[2]);
        if (!tech || !ind) throw ParseError("unknown tech or indicator", line_no);
        long long hour = 0;
        if (!parse_int(cols[3], hour) || hour < 0 || hour >= static_cast<long long>(kHorizonHours)) {
            throw ParseError("hour_index must be in 0..167", line_no);
        }
        double v = 0.0;
        if (!parse_double(cols[4], v) || !std::isfinite(v) || v < 0.0) {
            throw ParseError("value must be a finite non-negative number", line_no);
        }
        const SeriesKey key{cols[0], *tech, *ind};
        if (!seen[key].insert(static_cast<std::size_t>(hour)).second) {
            throw ParseError("duplicate hour for " + describe(key), line_no);
        }
        grid.entries[key][static_cast<std::size_t>(hour)] = v;
    }
    if (!have_start) throw ParseError("missing '# week_start=' line", line_no);
    for (const auto& [key, hours] : seen) {
        if (hours.size() != kHorizonHours) throw ValidationError("incomplete 168-hour entry for " + describe(key));
    }
    return grid;
}

ForecastGrid read_grid_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open forecast grid " + path.string());
    return read_grid_csv(in);
}

void write_breakdown_csv(std::ostream& out, const EvalReport& report) {
    out << "tech,indicator,mape,n_points\n";
    for (const auto& r : report.breakdown) {
        out << to_string(r.tech) << ',' << to_string(r.indicator) << ',' << format_double(r.mape) << ','
            << r.n_points << '\n';
    }
    auto tech_row = [&](Tech t, const std::optional<double>& m) {
        if (!m) return;
        std::size_t n = 0;
        for (const auto& r : report.breakdown) n += r.tech == t ? r.n_points : 0;
        out << to_string(t) << ",ALL," << format_double(*m) << ',' << n << '\n';
    };
    tech_row(Tech::FourG, report.mape_4g);
    tech_row(Tech::FiveG, report.mape_5g);
}

EvalReport evaluate_run(const std::filesystem::path& pred_path, const std::filesystem::path& actual_path,
                        const std::optional<std::filesystem::path>& breakdown_path) {
    const auto pred = read_grid_csv(pred_path);
    const auto actual = read_grid_csv(actual_path);
    auto report = weighted_mape(pred, actual);
    if (breakdown_path) {
        atomic_write(*breakdown_path, [&](std::ostream& out) { write_breakdown_csv(out, report); });
    }
    return report;
}

}  // namespace cellcast
