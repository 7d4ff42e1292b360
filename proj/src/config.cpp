#include "cellcast/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "cellcast/errors.hpp"
#include "cellcast/textio.hpp"

namespace cellcast {

const std::vector<std::string>& RunConfig::known_keys() {
    static const std::vector<std::string> keys{
        // paths and selection
        "in", "out", "holidays", "model", "warm_start", "actual", "pred", "breakdown", "log", "tech", "indicator",
        "method", "inference",
        // synthetic corpus
        "synth_seed", "n_cells_4g", "n_cells_5g", "n_days", "start_date", "indicators", "base_level", "daily_amp",
        "weekly_amp", "noise_sd", "holiday_dip", "missing_rate", "holiday_dates",
        // featurization
        "stride", "max_rows",
        // training
        "seed", "epochs", "lr0", "batch_sizes", "hidden", "adam_beta1", "adam_beta2", "adam_eps",
        // rule-based baseline
        "alpha1", "alpha2", "rule_weights"};
    return keys;
}

namespace {

bool is_known(const std::string& key) {
    const auto& keys = RunConfig::known_keys();
    return std::find(keys.begin(), keys.end(), key) != keys.end();
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    for (auto& item : split_csv(s)) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& why) {
    throw ValidationError("config key '" + key + "': invalid value '" + value + "' (" + why + ")");
}

}  // namespace

RunConfig RunConfig::parse(std::istream& in) {
    RunConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto text = trim(line);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
        const std::string key(trim(text.substr(0, eq)));
        const std::string value(trim(text.substr(eq + 1)));
        if (!is_known(key)) throw ParseError("unknown config key '" + key + "'", line_no);
        cfg.values_[key] = value;
    }
    return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file " + path.string());
    return parse(in);
}

void RunConfig::set(const std::string& key, const std::string& value) {
    if (!is_known(key)) throw ValidationError("unknown config key '" + key + "'");
    values_[key] = value;
}

std::optional<std::string> RunConfig::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::filesystem::path> RunConfig::path(const std::string& key) const {
    const auto v = get(key);
    if (!v || v->empty()) return std::nullopt;
    return std::filesystem::path(*v);
}

bool RunConfig::flag(const std::string& key) const {
    const auto v = get(key);
    if (!v) return false;
    if (*v == "true" || *v == "yes" || *v == "1") return true;
    if (*v == "false" || *v == "no" || *v == "0") return false;
    bad_value(key, *v, "expected true or false");
}

std::optional<Tech> RunConfig::tech() const {
    const auto v = get("tech");
    if (!v) return std::nullopt;
    const auto t = parse_tech(*v);
    if (!t) bad_value("tech", *v, "expected 4G or 5G");
    return t;
}

std::optional<Indicator> RunConfig::indicator() const {
    const auto v = get("indicator");
    if (!v) return std::nullopt;
    const auto i = parse_indicator(*v);
    if (!i) bad_value("indicator", *v, "expected one of PUSCH,PDSCH,PDCCH,RRC,PDCPUL,PDCPDL");
    return i;
}

namespace {

template <typename T>
void read_uint(const RunConfig& c, const std::string& key, T& out) {
    const auto v = c.get(key);
    if (!v) return;
    long long n = 0;
    if (!parse_int(*v, n) || n < 0) bad_value(key, *v, "expected a non-negative integer");
    out = static_cast<T>(n);
}

void read_real(const RunConfig& c, const std::string& key, double& out) {
    const auto v = c.get(key);
    if (!v) return;
    if (!parse_double(*v, out) || !std::isfinite(out)) bad_value(key, *v, "expected a finite number");
}

std::vector<Date> read_dates(const std::string& key, const std::string& text) {
    std::vector<Date> out;
    for (const auto& item : split_list(text)) {
        Date d;
        if (!parse_date(item, d)) bad_value(key, item, "expected YYYY-MM-DD");
        out.push_back(d);
    }
    return out;
}

}  // namespace

SynthConfig RunConfig::synth() const {
    SynthConfig s;
    read_uint(*this, "seed", s.seed);
    read_uint(*this, "synth_seed", s.seed);
    read_uint(*this, "n_cells_4g", s.n_cells_4g);
    read_uint(*this, "n_cells_5g", s.n_cells_5g);
    read_uint(*this, "n_days", s.n_days);
    read_real(*this, "base_level", s.base_level);
    read_real(*this, "daily_amp", s.daily_amp);
    read_real(*this, "weekly_amp", s.weekly_amp);
    read_real(*this, "noise_sd", s.noise_sd);
    read_real(*this, "holiday_dip", s.holiday_dip);
    read_real(*this, "missing_rate", s.missing_rate);
    if (const auto v = get("start_date")) {
        if (!parse_date(*v, s.start)) bad_value("start_date", *v, "expected YYYY-MM-DD");
    }
    if (const auto v = get("holiday_dates")) s.holiday_dates = read_dates("holiday_dates", *v);
    if (const auto v = get("indicators")) {
        s.indicators.clear();
        for (const auto& item : split_list(*v)) {
            const auto ind = parse_indicator(item);
            if (!ind) bad_value("indicators", item, "unknown indicator");
            s.indicators.push_back(*ind);
        }
    }
    return s;
}

TrainConfig RunConfig::train() const {
    TrainConfig t;
    read_uint(*this, "seed", t.seed);
    read_uint(*this, "epochs", t.epochs);
    read_uint(*this, "hidden", t.hidden);
    read_real(*this, "lr0", t.lr0);
    read_real(*this, "adam_beta1", t.adam.beta1);
    read_real(*this, "adam_beta2", t.adam.beta2);
    read_real(*this, "adam_eps", t.adam.eps);
    if (const auto v = get("batch_sizes")) {
        t.batch_candidates.clear();
        for (const auto& item : split_list(*v)) {
            long long n = 0;
            if (!parse_int(item, n) || n <= 0) bad_value("batch_sizes", item, "expected a positive integer");
            t.batch_candidates.push_back(static_cast<std::size_t>(n));
        }
    }
    try {
        t.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("training settings: ") + e.what());
    }
    return t;
}

WindowOptions RunConfig::windows() const {
    WindowOptions w;
    read_uint(*this, "stride", w.stride_days);
    if (w.stride_days == 0) bad_value("stride", "0", "stride must be positive");
    if (has("max_rows")) {
        std::size_t m = 0;
        read_uint(*this, "max_rows", m);
        w.max_rows = m;
    }
    return w;
}

RuleParams RunConfig::rule() const {
    RuleParams r;
    read_real(*this, "alpha1", r.alpha1);
    read_real(*this, "alpha2", r.alpha2);
    if (const auto v = get("rule_weights")) {
        const auto items = split_list(*v);
        if (items.size() != 6) bad_value("rule_weights", *v, "expected six comma-separated weights");
        for (std::size_t i = 0; i < 6; ++i) {
            if (!parse_double(items[i], r.w[i])) bad_value("rule_weights", items[i], "expected a number");
        }
    }
    r.validate();
    return r;
}

}  // namespace cellcast
