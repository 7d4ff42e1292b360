#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cellcast/baselines.hpp"
#include "cellcast/eval.hpp"
#include "cellcast/ingest.hpp"
#include "cellcast/model.hpp"
#include "cellcast/preprocess.hpp"
#include "cellcast/synth.hpp"
#include "cellcast/train.hpp"

namespace cellcast {

// Optional (tech, indicator) restriction applied by most stages.
struct SeriesFilter {
    std::optional<Tech> tech;
    std::optional<Indicator> indicator;

    bool accepts(const SeriesKey& k) const {
        return (!tech || *tech == k.tech) && (!indicator || *indicator == k.indicator);
    }
};

struct ImputeOutcome {
    std::vector<CellSeries> series;
    // Series that could not be imputed, with the reason.
    std::vector<std::pair<SeriesKey, std::string>> dropped;
};

ImputeOutcome impute_all(const std::vector<CellSeries>& series);

std::vector<SampleRow> featurize(const std::vector<CellSeries>& series, const HolidayCalendar& calendar,
                                 const WindowOptions& options, const SeriesFilter& filter = {});

// Model forecast for the week after the series. All selected series must end
// at the same hour. Series with an all-zero history get a zero forecast.
ForecastGrid forecast_with_model(const DenseMlpModel& model, const std::vector<CellSeries>& series,
                                 const HolidayCalendar& calendar, const SeriesFilter& filter = {});

enum class BaselineMethod { Naive, Rule };

ForecastGrid forecast_baseline(const std::vector<CellSeries>& series, BaselineMethod method,
                               const RuleParams& params = {}, const SeriesFilter& filter = {});

struct PipelineConfig {
    SynthConfig synth;
    TrainConfig train;
    WindowOptions windows;
    RuleParams rule;
};

struct PipelineResult {
    EvalReport dense_mlp;
    EvalReport naive;
    EvalReport rule;
    // Trained models keyed by (tech, indicator), in training order.
    std::vector<std::pair<std::pair<Tech, Indicator>, TrainResult>> models;
};

using ProgressSink = std::function<void(const std::string&)>;

// synth -> impute -> featurize -> train (4G cold, 5G warm from the 4G model
// of the same indicator) -> predict -> baselines -> evaluate. Artifacts are
// written under `out_dir` when it is given.
PipelineResult run_pipeline(const PipelineConfig& config, const std::optional<std::filesystem::path>& out_dir,
                            const ProgressSink& progress = {});

}  // namespace cellcast
