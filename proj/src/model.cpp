#include "cellcast/model.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>

#include "cellcast/errors.hpp"
#include "cellcast/preprocess.hpp"
#include "cellcast/textio.hpp"

namespace cellcast {

namespace {

std::array<std::pair<std::size_t, std::size_t>, 6> shapes_for(ModelDims d) {
    return {{{d.input, d.hidden},
             {d.input, d.hidden},
             {d.hidden, d.hidden},
             {d.input, d.output},
             {d.hidden, d.output},
             {d.hidden, d.output}}};
}

Matrix relu(const Matrix& m) {
    return m.cwiseMax(0.0);
}

// Elementwise upstream * 1[pre > 0].
Matrix relu_mask(const Matrix& upstream, const Matrix& pre) {
    return upstream.binaryExpr(pre, [](double g, double p) { return p > 0.0 ? g : 0.0; });
}

double sign(double x) {
    return static_cast<double>((x > 0.0) - (x < 0.0));
}

}  // namespace

DenseMlpModel DenseMlpModel::zeros(ModelDims dims) {
    DenseMlpModel m;
    const auto shapes = shapes_for(dims);
    for (std::size_t i = 0; i < 6; ++i) m.w[i] = Matrix::Zero(shapes[i].first, shapes[i].second);
    return m;
}

DenseMlpModel DenseMlpModel::random(ModelDims dims, std::uint64_t seed) {
    DenseMlpModel m = zeros(dims);
    std::mt19937_64 rng(seed);
    for (auto& w : m.w) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(w.rows()));
        std::uniform_real_distribution<double> dist(-bound, bound);
        for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = dist(rng);
    }
    return m;
}

ModelDims DenseMlpModel::dims() const {
    return {static_cast<std::size_t>(w[0].rows()), static_cast<std::size_t>(w[0].cols()),
            static_cast<std::size_t>(w[3].cols())};
}

void DenseMlpModel::check_shapes() const {
    const auto shapes = shapes_for(dims());
    for (std::size_t i = 0; i < 6; ++i) {
        if (static_cast<std::size_t>(w[i].rows()) != shapes[i].first ||
            static_cast<std::size_t>(w[i].cols()) != shapes[i].second) {
            throw std::invalid_argument("W" + std::to_string(i + 1) + " has inconsistent shape");
        }
    }
}

bool DenseMlpModel::all_finite() const {
    for (const auto& m : w) {
        if (!m.allFinite()) return false;
    }
    return true;
}

bool DenseMlpModel::operator==(const DenseMlpModel& o) const {
    for (std::size_t i = 0; i < 6; ++i) {
        if (w[i].rows() != o.w[i].rows() || w[i].cols() != o.w[i].cols()) return false;
        if (std::memcmp(w[i].data(), o.w[i].data(), sizeof(double) * static_cast<std::size_t>(w[i].size())) != 0) {
            return false;
        }
    }
    return true;
}

ForwardCache forward(const DenseMlpModel& model, const Matrix& inputs) {
    if (static_cast<std::size_t>(inputs.cols()) != model.dims().input) {
        throw std::invalid_argument("forward: input width " + std::to_string(inputs.cols()) + " != model input " +
                                    std::to_string(model.dims().input));
    }
    ForwardCache c;
    c.input = inputs;
    c.a1.noalias() = inputs * model.w[0];
    c.h1 = relu(c.a1);
    c.a2.noalias() = inputs * model.w[1];
    c.a2.noalias() += c.h1 * model.w[2];
    c.h2 = relu(c.a2) * 0.5;
    c.z.noalias() = inputs * model.w[3];
    c.z.noalias() += c.h1 * model.w[4];
    c.z.noalias() += c.h2 * model.w[5];
    c.z /= 3.0;
    c.output = relu(c.z);
    return c;
}

std::vector<double> predict(const DenseMlpModel& model, std::span<const double> input) {
    Matrix row(1, static_cast<Eigen::Index>(input.size()));
    for (std::size_t i = 0; i < input.size(); ++i) row(0, static_cast<Eigen::Index>(i)) = input[i];
    const auto cache = forward(model, row);
    return {cache.output.data(), cache.output.data() + cache.output.size()};
}

double combined_error(double actual, double pred, double row_mean) {
    const double ae = std::abs(actual - pred);
    if (actual != 0.0) {
        const double ape = ae / std::abs(actual) * 100.0;
        if (ape <= 100.0) return ape;
    }
    return ae / row_mean * 100.0;
}

namespace {

double row_mean(std::span<const double> actual) {
    double sum = 0.0;
    for (double a : actual) sum += a;
    const double mean = sum / static_cast<double>(actual.size());
    if (!(mean > 0.0)) throw DegenerateRowError("actual row has zero mean");
    return mean;
}

}  // namespace

double row_loss(std::span<const double> pred, std::span<const double> actual) {
    if (pred.size() != actual.size() || pred.empty()) throw std::invalid_argument("row_loss: size mismatch");
    const double mean = row_mean(actual);
    double ce = 0.0;
    for (std::size_t j = 0; j < pred.size(); ++j) ce += combined_error(actual[j], pred[j], mean);
    ce /= static_cast<double>(pred.size());
    return ce * ce;
}

std::vector<double> row_loss_gradient(std::span<const double> pred, std::span<const double> actual) {
    if (pred.size() != actual.size() || pred.empty()) throw std::invalid_argument("row_loss_gradient: size mismatch");
    const double n = static_cast<double>(pred.size());
    const double mean = row_mean(actual);
    double ce = 0.0;
    std::vector<double> dce(pred.size());
    for (std::size_t j = 0; j < pred.size(); ++j) {
        ce += combined_error(actual[j], pred[j], mean);
        const double ae = std::abs(actual[j] - pred[j]);
        // Same branch test as combined_error.
        const bool ape_branch = actual[j] != 0.0 && ae / std::abs(actual[j]) * 100.0 <= 100.0;
        const double denom = ape_branch ? std::abs(actual[j]) : mean;
        dce[j] = sign(pred[j] - actual[j]) * 100.0 / denom;
    }
    ce /= n;
    // d (mean ce)^2 = 2 mean(ce) * d ce_j / n
    for (auto& g : dce) g *= 2.0 * ce / n;
    return dce;
}

double batch_loss(const Matrix& pred, const Matrix& actual) {
    double total = 0.0;
    const auto cols = static_cast<std::size_t>(pred.cols());
    for (Eigen::Index r = 0; r < pred.rows(); ++r) {
        total += row_loss({pred.row(r).data(), cols}, {actual.row(r).data(), cols});
    }
    return total / static_cast<double>(pred.rows());
}

Gradients backward(const DenseMlpModel& model, const ForwardCache& cache, const Matrix& actual, LossTarget target) {
    const auto batch = cache.output.rows();
    if (actual.rows() != batch || actual.cols() != cache.output.cols()) {
        throw std::invalid_argument("backward: target shape mismatch");
    }
    const auto cols = static_cast<std::size_t>(actual.cols());

    const Matrix& pred = cache.loss_input(target);
    Matrix d_out(batch, actual.cols());
    for (Eigen::Index r = 0; r < batch; ++r) {
        const auto g = row_loss_gradient({pred.row(r).data(), cols}, {actual.row(r).data(), cols});
        for (std::size_t j = 0; j < cols; ++j) d_out(r, static_cast<Eigen::Index>(j)) = g[j];
    }
    d_out /= static_cast<double>(batch);

    // out = ReLU(z), z = (...)/3
    const Matrix dz = (target == LossTarget::Rectified ? relu_mask(d_out, cache.z) : d_out) / 3.0;
    Gradients g;
    g.w[3].noalias() = cache.input.transpose() * dz;
    g.w[4].noalias() = cache.h1.transpose() * dz;
    g.w[5].noalias() = cache.h2.transpose() * dz;

    // h2 = ReLU(a2) / 2
    Matrix dh2;
    dh2.noalias() = dz * model.w[5].transpose();
    const Matrix da2 = relu_mask(dh2, cache.a2) * 0.5;
    g.w[1].noalias() = cache.input.transpose() * da2;
    g.w[2].noalias() = cache.h1.transpose() * da2;

    Matrix dh1;
    dh1.noalias() = dz * model.w[4].transpose();
    dh1.noalias() += da2 * model.w[2].transpose();
    const Matrix da1 = relu_mask(dh1, cache.a1);
    g.w[0].noalias() = cache.input.transpose() * da1;
    return g;
}

// File layout (little endian):
//   8 bytes  magic "CCDNSMLP"
//   u32      format version
//   u32      reserved, 0
//   u64 x3   input, hidden, output
//   f64 ...  W1..W6, each row-major
namespace {

constexpr char kMagic[8] = {'C', 'C', 'D', 'N', 'S', 'M', 'L', 'P'};
constexpr std::uint32_t kFormatVersion = 1;

static_assert(std::endian::native == std::endian::little, "model files are written in host byte order");

template <typename T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& in) {
    T v{};
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw ModelFormatError("model file is truncated");
    return v;
}

}  // namespace

void save_model(std::ostream& out, const DenseMlpModel& model) {
    model.check_shapes();
    const auto d = model.dims();
    out.write(kMagic, sizeof kMagic);
    put<std::uint32_t>(out, kFormatVersion);
    put<std::uint32_t>(out, 0);
    put<std::uint64_t>(out, d.input);
    put<std::uint64_t>(out, d.hidden);
    put<std::uint64_t>(out, d.output);
    for (const auto& w : model.w) {
        out.write(reinterpret_cast<const char*>(w.data()), static_cast<std::streamsize>(sizeof(double) * w.size()));
    }
}

void save_model(const std::filesystem::path& path, const DenseMlpModel& model) {
    atomic_write(path, [&](std::ostream& out) { save_model(out, model); }, true);
}

DenseMlpModel load_model(std::istream& in) {
    char magic[8];
    if (!in.read(magic, sizeof magic)) throw ModelFormatError("model file is truncated");
    if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw ModelFormatError("not a dense-MLP model file");
    const auto version = get<std::uint32_t>(in);
    if (version != kFormatVersion) {
        throw ModelFormatError("unsupported model format version " + std::to_string(version));
    }
    get<std::uint32_t>(in);
    ModelDims d;
    d.input = get<std::uint64_t>(in);
    d.hidden = get<std::uint64_t>(in);
    d.output = get<std::uint64_t>(in);
    if (d.input != kInputWidth || d.output != kHorizonHours) {
        throw ModelFormatError("model dimensions " + std::to_string(d.input) + "x" + std::to_string(d.output) +
                               " do not match the required " + std::to_string(kInputWidth) + "x" +
                               std::to_string(kHorizonHours));
    }
    if (d.hidden == 0 || d.hidden > (1u << 20)) {
        throw ModelFormatError("implausible hidden size " + std::to_string(d.hidden));
    }
    auto model = DenseMlpModel::zeros(d);
    for (auto& w : model.w) {
        const auto bytes = static_cast<std::streamsize>(sizeof(double) * w.size());
        if (!in.read(reinterpret_cast<char*>(w.data()), bytes)) throw ModelFormatError("model file is truncated");
    }
    if (in.peek() != std::char_traits<char>::eof()) throw ModelFormatError("trailing bytes after model data");
    if (!model.all_finite()) throw ModelFormatError("model contains non-finite weights");
    return model;
}

DenseMlpModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelFormatError("cannot open model file " + path.string());
    return load_model(in);
}

}  // namespace cellcast
