#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "cellcast/model.hpp"
#include "cellcast/preprocess.hpp"

namespace cellcast {

struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct TrainConfig {
    std::size_t epochs = 128;
    double lr0 = 0.0005;
    std::vector<std::size_t> batch_candidates{8192, 16384};
    std::size_t hidden = 4096;  // used only for a cold start
    std::uint64_t seed = 0;
    AdamConfig adam;
    LossTarget loss_target = LossTarget::PreActivation;

    // Throws ValidationError on a violated invariant.
    void validate() const;
};

struct AdamState {
    std::array<Matrix, 6> m;
    std::array<Matrix, 6> v;
    std::uint64_t step = 0;

    static AdamState zeros_like(const DenseMlpModel& model);
};

// One bias-corrected Adam update of all six weight matrices.
void adam_step(DenseMlpModel& params, const Gradients& grads, AdamState& state, double lr, const AdamConfig& cfg);

// Linear decay lr0 * (1 - epoch / epochs), 0 <= epoch < epochs.
double lr_at_epoch(double lr0, std::size_t epochs, std::size_t epoch);

struct LossReport {
    std::vector<double> epoch_loss;  // mean per-row loss seen during each epoch
    std::vector<double> epoch_lr;
};

struct TrainResult {
    DenseMlpModel model;
    LossReport report;
    std::size_t batch_size = 0;
};

// Called after every epoch with (batch size, epoch, mean loss).
using EpochCallback = std::function<void(std::size_t, std::size_t, double)>;

// Trains one model per batch-size candidate, all from the same starting
// point (`init`, or a seeded random model), and keeps the one with the
// smallest final-epoch loss. Deterministic for fixed rows, config and init.
TrainResult train(const std::vector<SampleRow>& rows, const TrainConfig& config,
                  const std::optional<DenseMlpModel>& init = std::nullopt, const EpochCallback& on_epoch = {});

// Training-log CSV: epoch,lr,mean_loss
void write_training_log(const std::filesystem::path& path, const LossReport& report);

}  // namespace cellcast
