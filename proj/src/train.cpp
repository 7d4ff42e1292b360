#include "cellcast/train.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include "cellcast/errors.hpp"
#include "cellcast/textio.hpp"

namespace cellcast {

void TrainConfig::validate() const {
    if (!(lr0 > 0.0) || !std::isfinite(lr0)) throw ValidationError("lr0 must be positive");
    if (batch_candidates.empty()) throw ValidationError("batch_candidates must not be empty");
    for (auto b : batch_candidates) {
        if (b == 0) throw ValidationError("batch sizes must be positive");
    }
    if (hidden == 0) throw ValidationError("hidden size must be positive");
    if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0) || !(adam.beta2 >= 0.0 && adam.beta2 < 1.0) || !(adam.eps > 0.0)) {
        throw ValidationError("adam parameters out of range");
    }
}

AdamState AdamState::zeros_like(const DenseMlpModel& model) {
    AdamState s;
    for (std::size_t i = 0; i < 6; ++i) {
        s.m[i] = Matrix::Zero(model.w[i].rows(), model.w[i].cols());
        s.v[i] = Matrix::Zero(model.w[i].rows(), model.w[i].cols());
    }
    return s;
}

void adam_step(DenseMlpModel& params, const Gradients& grads, AdamState& state, double lr, const AdamConfig& cfg) {
    ++state.step;
    const double t = static_cast<double>(state.step);
    const double c1 = 1.0 - std::pow(cfg.beta1, t);
    const double c2 = 1.0 - std::pow(cfg.beta2, t);
    for (std::size_t i = 0; i < 6; ++i) {
        auto& m = state.m[i];
        auto& v = state.v[i];
        const auto& g = grads.w[i];
        m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
        v = cfg.beta2 * v + (1.0 - cfg.beta2) * g.cwiseProduct(g);
        params.w[i].array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + cfg.eps);
    }
}

double lr_at_epoch(double lr0, std::size_t epochs, std::size_t epoch) {
    if (epoch >= epochs) {
        throw std::out_of_range("epoch " + std::to_string(epoch) + " outside schedule of " + std::to_string(epochs));
    }
    return lr0 * (1.0 - static_cast<double>(epoch) / static_cast<double>(epochs));
}

namespace {

struct Dataset {
    Matrix inputs;
    Matrix targets;  // scaled
};

Dataset build_dataset(const std::vector<SampleRow>& rows) {
    Dataset d;
    d.inputs.resize(static_cast<Eigen::Index>(rows.size()), kInputWidth);
    d.targets.resize(static_cast<Eigen::Index>(rows.size()), kHorizonHours);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (!rows[r].target) throw ValidationError("training row " + std::to_string(r) + " has no target");
        const auto in = rows[r].input();
        const auto y = rows[r].scaled_target();
        const auto ri = static_cast<Eigen::Index>(r);
        for (std::size_t j = 0; j < kInputWidth; ++j) d.inputs(ri, static_cast<Eigen::Index>(j)) = in[j];
        for (std::size_t j = 0; j < kHorizonHours; ++j) d.targets(ri, static_cast<Eigen::Index>(j)) = y[j];
    }
    return d;
}

Matrix gather(const Matrix& m, std::span<const std::size_t> idx) {
    Matrix out(static_cast<Eigen::Index>(idx.size()), m.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(idx[i]));
    return out;
}

// Fisher-Yates with an explicit bounded draw so the permutation does not
// depend on the standard library's shuffle implementation.
void shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(v[i - 1], v[j]);
    }
}

TrainResult train_one(const Dataset& data, const TrainConfig& config, DenseMlpModel model, std::size_t batch_size,
                      const EpochCallback& on_epoch) {
    TrainResult result;
    result.batch_size = batch_size;
    AdamState state = AdamState::zeros_like(model);
    std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
    const auto n = static_cast<std::size_t>(data.inputs.rows());
    std::vector<std::size_t> order(n);

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        const double lr = lr_at_epoch(config.lr0, config.epochs, epoch);
        std::iota(order.begin(), order.end(), std::size_t{0});
        shuffle(order, rng);

        double loss_sum = 0.0;
        for (std::size_t first = 0; first < n; first += batch_size) {
            const std::span<const std::size_t> idx(order.data() + first, std::min(batch_size, n - first));
            const Matrix x = gather(data.inputs, idx);
            const Matrix y = gather(data.targets, idx);
            const auto cache = forward(model, x);
            const double loss = batch_loss(cache.loss_input(config.loss_target), y);
            if (!std::isfinite(loss)) {
                throw TrainingError("non-finite loss at epoch " + std::to_string(epoch) + " (batch size " +
                                    std::to_string(batch_size) + ", first row " + std::to_string(first) + ")");
            }
            loss_sum += loss * static_cast<double>(idx.size());
            adam_step(model, backward(model, cache, y, config.loss_target), state, lr, config.adam);
        }
        const double mean_loss = loss_sum / static_cast<double>(n);
        result.report.epoch_loss.push_back(mean_loss);
        result.report.epoch_lr.push_back(lr);
        if (on_epoch) on_epoch(batch_size, epoch, mean_loss);
    }
    if (!model.all_finite()) throw TrainingError("training produced non-finite weights");
    result.model = std::move(model);
    return result;
}

}  // namespace

TrainResult train(const std::vector<SampleRow>& rows, const TrainConfig& config,
                  const std::optional<DenseMlpModel>& init, const EpochCallback& on_epoch) {
    config.validate();
    if (rows.empty()) throw ValidationError("no training rows");

    DenseMlpModel start = init ? *init : DenseMlpModel::random({kInputWidth, config.hidden, kHorizonHours}, config.seed);
    start.check_shapes();
    const auto dims = start.dims();
    if (dims.input != kInputWidth || dims.output != kHorizonHours) {
        throw ValidationError("initial model has the wrong input/output width");
    }
    if (config.epochs == 0) return TrainResult{std::move(start), {}, config.batch_candidates.front()};

    const Dataset data = build_dataset(rows);
    std::optional<TrainResult> best;
    for (auto batch : config.batch_candidates) {
        auto run = train_one(data, config, start, batch, on_epoch);
        if (!best || run.report.epoch_loss.back() < best->report.epoch_loss.back()) best = std::move(run);
    }
    return std::move(*best);
}

void write_training_log(const std::filesystem::path& path, const LossReport& report) {
    atomic_write(path, [&](std::ostream& out) {
        out << "epoch,lr,mean_loss\n";
        for (std::size_t e = 0; e < report.epoch_loss.size(); ++e) {
            out << e << ',' << format_double(report.epoch_lr[e]) << ',' << format_double(report.epoch_loss[e]) << '\n';
        }
    });
}

}  // namespace cellcast
