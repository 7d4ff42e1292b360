#pragma once

#include <cmath>
#include <vector>

#include "cellcast/pipeline.hpp"

namespace cellcast::fixtures {

// Eight 28-day windows from one noisy synthetic 4G cell (35 days, stride 1).
inline std::vector<SampleRow> overfit_rows() {
    SynthConfig sc;
    sc.n_cells_4g = 1;
    sc.n_cells_5g = 0;
    sc.n_days = 42;
    sc.seed = 3;
    sc.missing_rate = 0.0;
    const auto corpus = generate(sc);
    return featurize(corpus.training, corpus.holidays, {});
}

inline TrainConfig overfit_config() {
    TrainConfig tc;
    tc.hidden = 64;
    tc.batch_candidates = {8};
    tc.epochs = 128;
    tc.lr0 = 0.005;
    tc.seed = 1;
    return tc;
}

// Mean over rows of the row's mean combined error (in percent), using the
// inference path.
inline double mean_row_ce(const DenseMlpModel& model, const std::vector<SampleRow>& rows) {
    double total = 0.0;
    for (const auto& r : rows) {
        const auto in = r.input();
        const auto pred = predict(model, in);
        const auto y = r.scaled_target();
        total += std::sqrt(row_loss(pred, y));
    }
    return total / static_cast<double>(rows.size());
}

// True when every 10-epoch moving average is no larger than the previous one,
// i.e. loss[e + 10] <= loss[e] for every e.
inline bool moving_window_non_increasing(const std::vector<double>& loss, std::size_t window = 10) {
    for (std::size_t e = 0; e + window < loss.size(); ++e) {
        if (loss[e + window] > loss[e]) return false;
    }
    return true;
}

}  // namespace cellcast::fixtures
