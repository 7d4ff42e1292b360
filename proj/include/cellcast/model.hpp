#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cellcast {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct ModelDims {
    std::size_t input = 0;
    std::size_t hidden = 0;
    std::size_t output = 0;

    bool operator==(const ModelDims&) const = default;
};

// Feed-forward network with dense skip connections. Activations are row
// vectors and every layer averages over its incoming paths:
//
//   h1  = ReLU(I W1)
//   h2  = ReLU(I W2 + h1 W3) / 2
//   out = ReLU((I W4 + h1 W5 + h2 W6) / 3)
//
// There are no bias terms.
struct DenseMlpModel {
    // Index i holds W(i+1): W1, W2 are input x hidden, W3 hidden x hidden,
    // W4 input x output, W5 and W6 hidden x output.
    std::array<Matrix, 6> w;

    static DenseMlpModel zeros(ModelDims dims);
    // Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], seeded.
    static DenseMlpModel random(ModelDims dims, std::uint64_t seed);

    ModelDims dims() const;
    // Throws std::invalid_argument when the six shapes disagree.
    void check_shapes() const;
    bool all_finite() const;

    bool operator==(const DenseMlpModel& o) const;
};

// Which output the training objective sees. The rectifier on the output
// layer is an inference-time guarantee of non-negative forecasts; by default
// the loss is taken on the pre-rectifier output so output units that start
// negative still receive gradient.
enum class LossTarget { PreActivation, Rectified };

struct ForwardCache {
    Matrix input;  // B x input
    Matrix a1;     // I W1
    Matrix h1;
    Matrix a2;     // I W2 + h1 W3
    Matrix h2;
    Matrix z;      // (I W4 + h1 W5 + h2 W6) / 3
    Matrix output;  // ReLU(z)

    const Matrix& loss_input(LossTarget t) const { return t == LossTarget::Rectified ? output : z; }
};

// Batched forward pass; each row of `inputs` is one sample.
ForwardCache forward(const DenseMlpModel& model, const Matrix& inputs);

std::vector<double> predict(const DenseMlpModel& model, std::span<const double> input);

// Combined error of a single point, in percent: the APE when the actual value
// is positive and APE <= 100, otherwise the absolute error relative to the
// row mean.
double combined_error(double actual, double pred, double row_mean);

// (mean combined error)^2 over one row. Throws DegenerateRowError when the
// actual row has zero mean.
double row_loss(std::span<const double> pred, std::span<const double> actual);

// d row_loss / d pred, with sign(0) = 0.
std::vector<double> row_loss_gradient(std::span<const double> pred, std::span<const double> actual);

struct Gradients {
    std::array<Matrix, 6> w;
};

// Gradient of the batch loss (mean of per-row losses over
// cache.loss_input(target)) with respect to W1..W6.
Gradients backward(const DenseMlpModel& model, const ForwardCache& cache, const Matrix& actual,
                   LossTarget target = LossTarget::PreActivation);

// Batch loss for already computed outputs: mean of row_loss over rows.
double batch_loss(const Matrix& pred, const Matrix& actual);

void save_model(std::ostream& out, const DenseMlpModel& model);
void save_model(const std::filesystem::path& path, const DenseMlpModel& model);
// Only the production shape (532 inputs, 168 outputs) is accepted.
DenseMlpModel load_model(std::istream& in);
DenseMlpModel load_model(const std::filesystem::path& path);

}  // namespace cellcast
