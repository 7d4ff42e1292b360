#include "cellcast/pipeline.hpp"

#include <ostream>

#include "cellcast/errors.hpp"
#include "cellcast/textio.hpp"

namespace cellcast {

ImputeOutcome impute_all(const std::vector<CellSeries>& series) {
    ImputeOutcome out;
    out.series.reserve(series.size());
    for (const auto& s : series) {
        try {
            out.series.push_back(impute(s));
        } catch (const ImputationError& e) {
            out.dropped.emplace_back(s.key, e.what());
        }
    }
    return out;
}

std::vector<SampleRow> featurize(const std::vector<CellSeries>& series, const HolidayCalendar& calendar,
                                 const WindowOptions& options, const SeriesFilter& filter) {
    std::vector<SampleRow> rows;
    for (const auto& s : series) {
        if (!filter.accepts(s.key)) continue;
        auto part = extract_windows(s, calendar, options);
        rows.insert(rows.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return rows;
}

namespace {

HourStamp common_end(const std::vector<CellSeries>& series, const SeriesFilter& filter) {
    std::optional<HourStamp> end;
    for (const auto& s : series) {
        if (!filter.accepts(s.key)) continue;
        if (end && *end != s.end()) {
            throw ValidationError("series end at different hours (" + format_hour_stamp(*end) + " vs " +
                                  format_hour_stamp(s.end()) + "); cannot build one forecast week");
        }
        end = s.end();
    }
    if (!end) throw ValidationError("no series match the selection");
    return *end;
}

}  // namespace

ForecastGrid forecast_with_model(const DenseMlpModel& model, const std::vector<CellSeries>& series,
                                 const HolidayCalendar& calendar, const SeriesFilter& filter) {
    ForecastGrid grid;
    grid.week_start = common_end(series, filter);
    for (const auto& s : series) {
        if (!filter.accepts(s.key)) continue;
        const auto row = forecast_row(s, calendar);
        if (!row) {
            grid.entries[s.key] = Horizon{};
            continue;
        }
        const auto input = row->input();
        const auto out = predict(model, input);
        grid.entries[s.key] = unscale(std::span<const double, kHorizonHours>(out.data(), kHorizonHours), row->scale);
    }
    return grid;
}

ForecastGrid forecast_baseline(const std::vector<CellSeries>& series, BaselineMethod method, const RuleParams& params,
                               const SeriesFilter& filter) {
    ForecastGrid grid;
    grid.week_start = common_end(series, filter);
    for (const auto& s : series) {
        if (!filter.accepts(s.key)) continue;
        grid.entries[s.key] = method == BaselineMethod::Naive ? naive_forecast(s) : rule_based_week(s, params);
    }
    return grid;
}

namespace {

std::string artifact_stem(Tech t, Indicator i) {
    return std::string(to_string(t)) + "_" + std::string(to_string(i));
}

void merge_into(ForecastGrid& into, const ForecastGrid& part) {
    into.week_start = part.week_start;
    for (const auto& [k, v] : part.entries) into.entries[k] = v;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config, const std::optional<std::filesystem::path>& out_dir,
                            const ProgressSink& progress) {
    auto note = [&](const std::string& msg) {
        if (progress) progress(msg);
    };
    PipelineResult result;

    const auto corpus = generate(config.synth);
    if (out_dir) write_corpus(corpus, *out_dir);
    note("synth: " + std::to_string(corpus.training.size()) + " series");

    auto imputed = impute_all(corpus.training);
    for (const auto& [key, why] : imputed.dropped) note("impute: dropped " + key.cell_id + ": " + why);
    if (out_dir) {
        atomic_write(*out_dir / "imputed.csv", [&](std::ostream& out) { write_series_csv(out, imputed.series); });
    }

    ForecastGrid dense;
    for (Indicator ind : config.synth.indicators) {
        std::optional<DenseMlpModel> donor;
        for (Tech tech : {Tech::FourG, Tech::FiveG}) {
            const SeriesFilter filter{tech, ind};
            const auto rows = featurize(imputed.series, corpus.holidays, config.windows, filter);
            if (rows.empty()) continue;
            const auto stem = artifact_stem(tech, ind);
            if (out_dir) {
                atomic_write(*out_dir / ("features_" + stem + ".csv"),
                             [&](std::ostream& out) { write_feature_csv(out, rows); });
            }
            note("train " + stem + ": " + std::to_string(rows.size()) + " rows" + (donor ? ", warm start" : ""));
            auto trained = train(rows, config.train, donor);
            note("train " + stem + ": final loss " +
                 (trained.report.epoch_loss.empty() ? std::string("n/a")
                                                    : format_double(trained.report.epoch_loss.back())) +
                 ", batch " + std::to_string(trained.batch_size));
            if (out_dir) {
                save_model(*out_dir / ("model_" + stem + ".bin"), trained.model);
                write_training_log(*out_dir / ("train_log_" + stem + ".csv"), trained.report);
            }
            merge_into(dense, forecast_with_model(trained.model, imputed.series, corpus.holidays, filter));
            if (tech == Tech::FourG) donor = trained.model;
            result.models.push_back({{tech, ind}, std::move(trained)});
        }
    }

    const auto naive = forecast_baseline(imputed.series, BaselineMethod::Naive);
    const auto rule = forecast_baseline(imputed.series, BaselineMethod::Rule, config.rule);
    result.dense_mlp = weighted_mape(dense, corpus.actual);
    result.naive = weighted_mape(naive, corpus.actual);
    result.rule = weighted_mape(rule, corpus.actual);

    if (out_dir) {
        const std::pair<const char*, const ForecastGrid*> grids[] = {
            {"dense_mlp", &dense}, {"naive", &naive}, {"rule", &rule}};
        const std::pair<const char*, const EvalReport*> reports[] = {
            {"dense_mlp", &result.dense_mlp}, {"naive", &result.naive}, {"rule", &result.rule}};
        for (const auto& [name, grid] : grids) {
            atomic_write(*out_dir / (std::string("forecast_") + name + ".csv"),
                         [&](std::ostream& out) { write_grid_csv(out, *grid); });
        }
        for (const auto& [name, rep] : reports) {
            atomic_write(*out_dir / (std::string("breakdown_") + name + ".csv"),
                         [&](std::ostream& out) { write_breakdown_csv(out, *rep); });
        }
        atomic_write(*out_dir / "report.csv", [&](std::ostream& out) {
            out << "method,mape_4g,mape_5g,weighted_mape\n";
            for (const auto& [name, rep] : reports) {
                out << name << ',' << (rep->mape_4g ? format_double(*rep->mape_4g) : "") << ','
                    << (rep->mape_5g ? format_double(*rep->mape_5g) : "") << ',' << format_double(rep->weighted_mape)
                    << '\n';
            }
        });
    }
    return result;
}

}  // namespace cellcast
