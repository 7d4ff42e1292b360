#include "cellcast/ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

#include "cellcast/errors.hpp"
#include "cellcast/textio.hpp"

namespace cellcast {

std::string_view to_string(Tech t) {
    return t == Tech::FourG ? "4G" : "5G";
}

std::string_view to_string(Indicator i) {
    switch (i) {
        case Indicator::PUSCH: return "PUSCH";
        case Indicator::PDSCH: return "PDSCH";
        case Indicator::PDCCH: return "PDCCH";
        case Indicator::RRC: return "RRC";
        case Indicator::PDCPUL: return "PDCPUL";
        case Indicator::PDCPDL: return "PDCPDL";
    }
    return "?";
}

std::optional<Tech> parse_tech(std::string_view s) {
    if (s == "4G") return Tech::FourG;
    if (s == "5G") return Tech::FiveG;
    return std::nullopt;
}

std::optional<Indicator> parse_indicator(std::string_view s) {
    for (Indicator i : kAllIndicators) {
        if (to_string(i) == s) return i;
    }
    return std::nullopt;
}

std::size_t CellSeries::missing_count() const {
    std::size_t n = 0;
    for (const auto& v : values) n += v ? 0 : 1;
    return n;
}

std::vector<double> CellSeries::dense_values() const {
    std::vector<double> out;
    out.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!values[i]) {
            throw ValidationError("series " + key.cell_id + " has a missing value at " +
                                  format_hour_stamp(start + static_cast<std::int64_t>(i)));
        }
        out.push_back(*values[i]);
    }
    return out;
}

namespace {

struct Group {
    std::string city;
    std::map<HourStamp, std::optional<double>> points;
};

}  // namespace

std::vector<CellSeries> parse_series_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (!line.empty()) {
            header = split_csv(line);
            break;
        }
    }
    const bool has_city = header.size() == 6 && header[5] == "city";
    if (!(header.size() == 5 || has_city) || header[0] != "cell_id" || header[1] != "tech" ||
        header[2] != "indicator" || header[3] != "timestamp" || header[4] != "value") {
        throw ParseError("expected header cell_id,tech,indicator,timestamp,value[,city]", line_no);
    }

    std::map<SeriesKey, Group> groups;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty()) continue;
        const auto cols = split_csv(line);
        if (cols.size() != header.size()) {
            throw ParseError("expected " + std::to_string(header.size()) + " columns, got " +
                                 std::to_string(cols.size()),
                             line_no);
        }
        const auto tech = parse_tech(cols[1]);
        if (!tech) throw ParseError("unknown tech '" + cols[1] + "'", line_no);
        const auto indicator = parse_indicator(cols[2]);
        if (!indicator) throw ParseError("unknown indicator '" + cols[2] + "'", line_no);
        HourStamp ts;
        if (!parse_hour_stamp(cols[3], ts)) throw ParseError("malformed timestamp '" + cols[3] + "'", line_no);

        std::optional<double> value;
        if (!cols[4].empty()) {
            double v = 0.0;
            if (!parse_double(cols[4], v)) throw ParseError("malformed value '" + cols[4] + "'", line_no);
            if (!std::isfinite(v)) throw ParseError("non-finite value '" + cols[4] + "'", line_no);
            if (v < 0.0) throw ParseError("negative value " + cols[4], line_no);
            value = v;
        }

        Group& g = groups[SeriesKey{cols[0], *tech, *indicator}];
        if (has_city && !cols[5].empty()) g.city = cols[5];
        auto [it, inserted] = g.points.emplace(ts, value);
        if (!inserted && it->second != value) {
            if (!it->second) {
                it->second = value;
            } else if (value) {
                throw ParseError("conflicting duplicate for " + cols[0] + " " + cols[2] + " at " + cols[3], line_no);
            }
        }
    }

    std::vector<CellSeries> out;
    out.reserve(groups.size());
    for (auto& [key, g] : groups) {
        CellSeries s;
        s.key = key;
        s.city = std::move(g.city);
        s.start = g.points.begin()->first;
        const auto last = g.points.rbegin()->first;
        s.values.assign(static_cast<std::size_t>(last - s.start + 1), std::nullopt);
        for (const auto& [ts, v] : g.points) s.values[static_cast<std::size_t>(ts - s.start)] = v;
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<CellSeries> parse_series_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open series file " + path.string());
    return parse_series_csv(in);
}

void write_series_csv(std::ostream& out, const std::vector<CellSeries>& series) {
    bool any_city = false;
    for (const auto& s : series) any_city = any_city || !s.city.empty();
    out << "cell_id,tech,indicator,timestamp,value" << (any_city ? ",city" : "") << '\n';
    for (const auto& s : series) {
        const std::string prefix =
            s.key.cell_id + ',' + std::string(to_string(s.key.tech)) + ',' + std::string(to_string(s.key.indicator)) + ',';
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            out << prefix << format_hour_stamp(s.start + static_cast<std::int64_t>(i)) << ',';
            if (s.values[i]) out << format_double(*s.values[i]);
            if (any_city) out << ',' << s.city;
            out << '\n';
        }
    }
}

HolidayCalendar parse_holidays(std::istream& in) {
    HolidayCalendar cal;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        const auto text = trim(line);
        if (text.empty()) continue;
        Date d;
        if (!parse_date(text, d)) throw ParseError("unparseable date '" + std::string(text) + "'", line_no);
        cal.add(d);
    }
    return cal;
}

HolidayCalendar parse_holidays(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open holiday file " + path.string());
    return parse_holidays(in);
}

void write_holidays(std::ostream& out, const HolidayCalendar& calendar) {
    for (Date d : calendar.days()) out << format_date(d) << '\n';
}

}  // namespace cellcast
