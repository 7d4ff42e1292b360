// cellcast: command-line front end for the cell KPI forecasting pipeline.
//
// Every subcommand reads an optional flat config file (--config) and lets
// individual keys be overridden on the command line. Outputs are written
// atomically. Exit status: 0 success, 1 invalid input, 2 internal error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include "cellcast/config.hpp"
#include "cellcast/errors.hpp"
#include "cellcast/eval.hpp"
#include "cellcast/pipeline.hpp"
#include "cellcast/textio.hpp"

namespace fs = std::filesystem;
using namespace cellcast;

namespace {

struct Invocation {
    std::string config_path;
    std::map<std::string, std::string> overrides;
    bool inference = false;
};

// (flag, config key, help)
const std::tuple<const char*, const char*, const char*> kOverrides[] = {
    {"--seed", "seed", "random seed"},
    {"--in", "in", "input file"},
    {"--out", "out", "output file or directory"},
    {"--holidays", "holidays", "holiday file (one YYYY-MM-DD per line)"},
    {"--model", "model", "model file"},
    {"--actual", "actual", "actual ForecastGrid CSV"},
    {"--pred", "pred", "predicted ForecastGrid CSV"},
    {"--breakdown", "breakdown", "per-indicator breakdown CSV to write"},
    {"--log", "log", "training log CSV to write"},
    {"--indicator", "indicator", "restrict to one indicator"},
    {"--tech", "tech", "restrict to 4G or 5G"},
    {"--stride", "stride", "window stride in days"},
    {"--max-rows", "max_rows", "keep at most this many most recent windows per series"},
    {"--epochs", "epochs", "training epochs"},
    {"--lr0", "lr0", "first-epoch learning rate"},
    {"--batch-sizes", "batch_sizes", "comma-separated batch-size candidates"},
    {"--hidden", "hidden", "hidden layer width for a cold start"},
    {"--warm-start", "warm_start", "initialize training from this model file"},
    {"--method", "method", "baseline method: naive or rule"},
};

CLI::App* add_subcommand(CLI::App& app, const std::string& name, const std::string& help, Invocation& inv) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", inv.config_path, "flat key = value config file");
    for (const auto& [flag, key, text] : kOverrides) {
        sub->add_option_function<std::string>(
            flag, [&inv, key = std::string(key)](const std::string& v) { inv.overrides[key] = v; }, text);
    }
    return sub;
}

RunConfig resolve(const Invocation& inv) {
    RunConfig cfg;
    if (!inv.config_path.empty()) {
        if (!fs::exists(inv.config_path)) throw ValidationError("config file not found: " + inv.config_path);
        cfg = RunConfig::load(inv.config_path);
    }
    for (const auto& [k, v] : inv.overrides) cfg.set(k, v);
    return cfg;
}

fs::path require_input(const RunConfig& cfg, const std::string& key) {
    const auto p = cfg.path(key);
    if (!p) throw ValidationError("missing required setting '" + key + "'");
    if (!fs::is_regular_file(*p)) throw ValidationError("'" + key + "': no such file " + p->string());
    return *p;
}

fs::path require_output(const RunConfig& cfg, const std::string& key) {
    const auto p = cfg.path(key);
    if (!p) throw ValidationError("missing required setting '" + key + "'");
    const auto parent = p->has_parent_path() ? p->parent_path() : fs::path(".");
    if (!fs::is_directory(parent)) throw ValidationError("'" + key + "': directory does not exist: " + parent.string());
    return *p;
}

SeriesFilter filter_of(const RunConfig& cfg) {
    return SeriesFilter{cfg.tech(), cfg.indicator()};
}

int run_synth(const RunConfig& cfg) {
    const auto dir = cfg.path("out");
    if (!dir) throw ValidationError("missing required setting 'out'");
    const auto corpus = generate(cfg.synth());
    const auto paths = write_corpus(corpus, *dir);
    std::cout << "series=" << paths.series.string() << "\nholidays=" << paths.holidays.string()
              << "\nactual=" << paths.actual.string() << '\n';
    return 0;
}

int run_impute(const RunConfig& cfg) {
    const auto in = require_input(cfg, "in");
    const auto out = require_output(cfg, "out");
    const auto result = impute_all(parse_series_csv(in));
    for (const auto& [key, why] : result.dropped) std::cerr << "warning: dropped series: " << why << '\n';
    atomic_write(out, [&](std::ostream& os) { write_series_csv(os, result.series); });
    std::cout << "imputed=" << result.series.size() << " dropped=" << result.dropped.size() << '\n';
    return 0;
}

int run_featurize(const RunConfig& cfg, bool inference) {
    const auto in = require_input(cfg, "in");
    const auto hol = require_input(cfg, "holidays");
    const auto out = require_output(cfg, "out");
    const auto windows = cfg.windows();
    const auto filter = filter_of(cfg);
    const auto series = parse_series_csv(in);
    const auto calendar = parse_holidays(hol);
    std::vector<SampleRow> rows;
    if (inference) {
        for (const auto& s : series) {
            if (!filter.accepts(s.key)) continue;
            if (auto r = forecast_row(s, calendar)) rows.push_back(std::move(*r));
        }
    } else {
        rows = featurize(series, calendar, windows, filter);
    }
    atomic_write(out, [&](std::ostream& os) { write_feature_csv(os, rows); });
    std::cout << "rows=" << rows.size() << '\n';
    return 0;
}

int run_train(const RunConfig& cfg) {
    const auto in = require_input(cfg, "in");
    const auto out = require_output(cfg, "out");
    std::optional<fs::path> warm;
    if (cfg.path("warm_start")) warm = require_input(cfg, "warm_start");
    fs::path log = out;
    log += ".log.csv";
    if (cfg.path("log")) log = require_output(cfg, "log");
    const auto config = cfg.train();
    const auto filter = filter_of(cfg);

    std::vector<SampleRow> rows;
    for (auto& r : read_feature_csv(in)) {
        if (filter.accepts(r.origin.key)) rows.push_back(std::move(r));
    }
    std::optional<DenseMlpModel> init;
    if (warm) init = load_model(*warm);
    const auto result = train(rows, config, init, [](std::size_t batch, std::size_t epoch, double loss) {
        std::cerr << "batch " << batch << " epoch " << epoch << " loss " << loss << '\n';
    });
    save_model(out, result.model);
    write_training_log(log, result.report);
    std::cout << "rows=" << rows.size() << " batch_size=" << result.batch_size;
    if (!result.report.epoch_loss.empty()) std::cout << " final_loss=" << format_double(result.report.epoch_loss.back());
    std::cout << '\n';
    return 0;
}

int run_predict(const RunConfig& cfg) {
    const auto in = require_input(cfg, "in");
    const auto hol = require_input(cfg, "holidays");
    const auto model_path = require_input(cfg, "model");
    const auto out = require_output(cfg, "out");
    const auto filter = filter_of(cfg);
    const auto model = load_model(model_path);
    const auto grid = forecast_with_model(model, parse_series_csv(in), parse_holidays(hol), filter);
    atomic_write(out, [&](std::ostream& os) { write_grid_csv(os, grid); });
    std::cout << "forecasts=" << grid.entries.size() << '\n';
    return 0;
}

int run_baseline(const RunConfig& cfg) {
    const auto in = require_input(cfg, "in");
    const auto out = require_output(cfg, "out");
    const auto method_name = cfg.get("method").value_or("naive");
    BaselineMethod method;
    if (method_name == "naive") {
        method = BaselineMethod::Naive;
    } else if (method_name == "rule") {
        method = BaselineMethod::Rule;
    } else {
        throw ValidationError("config key 'method': expected naive or rule, got '" + method_name + "'");
    }
    const auto params = cfg.rule();
    const auto grid = forecast_baseline(parse_series_csv(in), method, params, filter_of(cfg));
    atomic_write(out, [&](std::ostream& os) { write_grid_csv(os, grid); });
    std::cout << "forecasts=" << grid.entries.size() << '\n';
    return 0;
}

void print_report(const EvalReport& r) {
    std::printf("weighted_mape=%.6f\n", r.weighted_mape);
    if (r.mape_4g) std::printf("mape_4g=%.6f\n", *r.mape_4g);
    if (r.mape_5g) std::printf("mape_5g=%.6f\n", *r.mape_5g);
    std::printf("n_points_scored=%zu\nn_points_skipped_zero_actual=%zu\n", r.n_points_scored,
                r.n_points_skipped_zero_actual);
}

int run_evaluate(const RunConfig& cfg) {
    const auto pred = cfg.has("pred") ? require_input(cfg, "pred") : require_input(cfg, "in");
    const auto actual = require_input(cfg, "actual");
    std::optional<fs::path> breakdown;
    if (cfg.path("breakdown")) breakdown = require_output(cfg, "breakdown");
    print_report(evaluate_run(pred, actual, breakdown));
    return 0;
}

int run_pipeline_cmd(const RunConfig& cfg) {
    const auto dir = cfg.path("out");
    if (!dir) throw ValidationError("missing required setting 'out'");
    PipelineConfig pc{cfg.synth(), cfg.train(), cfg.windows(), cfg.rule()};
    const auto result = run_pipeline(pc, *dir, [](const std::string& msg) { std::cerr << msg << '\n'; });
    std::printf("dense_mlp ");
    print_report(result.dense_mlp);
    std::printf("naive ");
    print_report(result.naive);
    std::printf("rule ");
    print_report(result.rule);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cell-level KPI forecasting with a dense-skip MLP"};
    app.require_subcommand(1);
    Invocation inv;
    auto* synth = add_subcommand(app, "synth", "generate a synthetic KPI corpus", inv);
    auto* imp = add_subcommand(app, "impute", "fill missing values by weekly periodicity", inv);
    auto* feat = add_subcommand(app, "featurize", "convert series into sample rows", inv);
    feat->add_flag("--inference", inv.inference, "emit one forecast row per series instead of training windows");
    auto* tr = add_subcommand(app, "train", "train one dense-MLP model", inv);
    auto* pred = add_subcommand(app, "predict", "forecast the week after each series", inv);
    auto* base = add_subcommand(app, "baseline", "naive or rule-based forecast", inv);
    auto* ev = add_subcommand(app, "evaluate", "weighted MAPE of a forecast grid", inv);
    auto* pipe = add_subcommand(app, "pipeline", "synth, train, predict and evaluate end to end", inv);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const auto cfg = resolve(inv);
        if (*synth) return run_synth(cfg);
        if (*imp) return run_impute(cfg);
        if (*feat) return run_featurize(cfg, inv.inference || cfg.flag("inference"));
        if (*tr) return run_train(cfg);
        if (*pred) return run_predict(cfg);
        if (*base) return run_baseline(cfg);
        if (*ev) return run_evaluate(cfg);
        if (*pipe) return run_pipeline_cmd(cfg);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const ImputationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const ModelFormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
