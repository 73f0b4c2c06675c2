#include "sigkit/model.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <string>

#include "sigkit/autodiff.hpp"
#include "sigkit/detail/rng.hpp"
#include "sigkit/errors.hpp"

namespace sigkit {

namespace {

using detail::splitmix64;

// Distinct deterministic streams per role.
constexpr std::uint64_t kDataStream = 0x646174615f780000ULL;
constexpr std::uint64_t kTeacherStream = 0x7465616368657200ULL;
constexpr std::uint64_t kStudentStream = 0x73747564656e7400ULL;

void fill_uniform(std::mt19937_64& rng, double bound, std::vector<double>& out) {
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (double& x : out) x = dist(rng);
}

double activate(Activation a, double x) { return a == Activation::Tanh ? std::tanh(x) : x; }

struct ForwardCache {
    PathBatch z;            // activated paths (B, L, d)
    std::vector<double> s;  // signatures (B, D)
    std::vector<double> y;  // outputs (B, 10)
};

void forward_cached(const ModelParams& params, const double* X, std::size_t batch,
                    std::size_t seq_len, ForwardCache& cache) {
    const std::size_t in = static_cast<std::size_t>(kModelInputWidth);
    const std::size_t out = static_cast<std::size_t>(kModelOutputWidth);
    const std::size_t d = static_cast<std::size_t>(params.sig_input_size);
    const std::size_t D = sig_dim(params.sig_input_size, params.depth);

    cache.z.batch = batch;
    cache.z.len = seq_len;
    cache.z.dim = params.sig_input_size;
    cache.z.values.assign(batch * seq_len * d, 0.0);
    for (std::size_t bt = 0; bt < batch * seq_len; ++bt) {
        const double* xrow = X + bt * in;
        double* zrow = cache.z.values.data() + bt * d;
        for (std::size_t j = 0; j < d; ++j) {
            double acc = params.b1[j];
            for (std::size_t i = 0; i < in; ++i) acc += xrow[i] * params.w1[i * d + j];
            zrow[j] = activate(params.activation, acc);
        }
    }

    SignatureBatch sig = signature(cache.z, params.depth, params.kernel);
    cache.s = std::move(sig.flat);

    cache.y.assign(batch * out, 0.0);
    for (std::size_t b = 0; b < batch; ++b) {
        const double* srow = cache.s.data() + b * D;
        double* yrow = cache.y.data() + b * out;
        for (std::size_t o = 0; o < out; ++o) {
            double acc = params.b2[o];
            for (std::size_t k = 0; k < D; ++k) acc += srow[k] * params.w2[k * out + o];
            yrow[o] = acc;
        }
    }
}

}  // namespace

const char* activation_name(Activation activation) {
    return activation == Activation::Tanh ? "tanh" : "identity";
}

Activation activation_from_name(const std::string& name) {
    if (name == "tanh") return Activation::Tanh;
    if (name == "identity") return Activation::Identity;
    throw DomainError("unknown activation '" + name + "', expected tanh or identity");
}

ModelParams ModelParams::init(int sig_input_size, int depth, KernelKind kernel,
                              Activation activation, std::uint64_t seed) {
    if (sig_input_size < 1) throw DomainError("ModelParams: sig_input_size must be >= 1");
    const std::size_t D = sig_dim(sig_input_size, depth);
    ModelParams p;
    p.sig_input_size = sig_input_size;
    p.depth = depth;
    p.kernel = kernel;
    p.activation = activation;
    p.w1.resize(static_cast<std::size_t>(kModelInputWidth) * static_cast<std::size_t>(sig_input_size));
    p.b1.resize(static_cast<std::size_t>(sig_input_size));
    p.w2.resize(D * static_cast<std::size_t>(kModelOutputWidth));
    p.b2.resize(static_cast<std::size_t>(kModelOutputWidth));

    std::mt19937_64 rng(seed);
    const double bound1 = 1.0 / std::sqrt(static_cast<double>(kModelInputWidth));
    const double bound2 = 1.0 / std::sqrt(static_cast<double>(D));
    fill_uniform(rng, bound1, p.w1);
    fill_uniform(rng, bound1, p.b1);
    fill_uniform(rng, bound2, p.w2);
    fill_uniform(rng, bound2, p.b2);
    return p;
}

std::vector<std::size_t> epoch_batch_sizes(std::size_t n_samples, std::size_t batch_size) {
    if (batch_size < 1) throw DomainError("epoch_batch_sizes: batch_size must be >= 1");
    std::vector<std::size_t> sizes(n_samples / batch_size, batch_size);
    if (n_samples % batch_size != 0) sizes.push_back(n_samples % batch_size);
    return sizes;
}

Dataset synth_data(const TrainConfig& config) {
    const std::size_t in = static_cast<std::size_t>(kModelInputWidth);
    const std::size_t out = static_cast<std::size_t>(kModelOutputWidth);
    Dataset data;
    data.n = config.n_samples;
    data.seq_len = config.seq_len;
    data.X.resize(config.n_samples * config.seq_len * in);
    data.Y.resize(config.n_samples * out);

    std::mt19937_64 rng(splitmix64(config.seed ^ kDataStream));
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& x : data.X) x = normal(rng);

    // The teacher is pinned to the sequential kernel so targets are
    // identical whichever kernel the trained model uses.
    ModelParams teacher = ModelParams::init(config.sig_input_size, config.depth,
                                            KernelKind::Sequential, config.activation,
                                            splitmix64(config.seed ^ kTeacherStream));
    const std::size_t chunk = 256;
    ForwardCache cache;
    for (std::size_t start = 0; start < config.n_samples; start += chunk) {
        const std::size_t count = std::min(chunk, config.n_samples - start);
        forward_cached(teacher, data.X.data() + start * config.seq_len * in, count,
                       config.seq_len, cache);
        for (std::size_t idx = 0; idx < count * out; ++idx) data.Y[start * out + idx] = cache.y[idx];
    }
    return data;
}

std::vector<double> forward(const ModelParams& params, const std::vector<double>& X,
                            std::size_t batch, std::size_t seq_len) {
    if (X.size() != batch * seq_len * static_cast<std::size_t>(kModelInputWidth)) {
        throw DomainError("forward: X size does not match (batch, seq_len, 20)");
    }
    ForwardCache cache;
    forward_cached(params, X.data(), batch, seq_len, cache);
    return cache.y;
}

double train_step(ModelParams& params, const double* X, const double* Y, std::size_t batch,
                  std::size_t seq_len, double learning_rate) {
    const std::size_t in = static_cast<std::size_t>(kModelInputWidth);
    const std::size_t out = static_cast<std::size_t>(kModelOutputWidth);
    const std::size_t d = static_cast<std::size_t>(params.sig_input_size);
    const std::size_t D = sig_dim(params.sig_input_size, params.depth);

    ForwardCache cache;
    forward_cached(params, X, batch, seq_len, cache);

    double loss = 0.0;
    std::vector<double> gy(batch * out);
    const double scale = 1.0 / static_cast<double>(batch * out);
    for (std::size_t idx = 0; idx < batch * out; ++idx) {
        const double diff = cache.y[idx] - Y[idx];
        loss += diff * diff * scale;
        gy[idx] = 2.0 * diff * scale;
    }

    // Output layer.
    std::vector<double> gw2(params.w2.size(), 0.0);
    std::vector<double> gb2(out, 0.0);
    SignatureCotangent gs;
    gs.batch = batch;
    gs.dim = params.sig_input_size;
    gs.depth = params.depth;
    gs.values.assign(batch * D, 0.0);
    for (std::size_t b = 0; b < batch; ++b) {
        const double* srow = cache.s.data() + b * D;
        const double* gyrow = gy.data() + b * out;
        for (std::size_t o = 0; o < out; ++o) gb2[o] += gyrow[o];
        for (std::size_t k = 0; k < D; ++k) {
            const double sv = srow[k];
            double acc = 0.0;
            for (std::size_t o = 0; o < out; ++o) {
                gw2[k * out + o] += sv * gyrow[o];
                acc += gyrow[o] * params.w2[k * out + o];
            }
            gs.values[b * D + k] = acc;
        }
    }

    // Through the signature into the activated path.
    PathGradient gz = signature_vjp(cache.z, params.depth, gs, params.kernel);

    // Input layer.
    std::vector<double> gw1(params.w1.size(), 0.0);
    std::vector<double> gb1(d, 0.0);
    for (std::size_t bt = 0; bt < batch * seq_len; ++bt) {
        const double* xrow = X + bt * in;
        const double* zrow = cache.z.values.data() + bt * d;
        const double* gzrow = gz.values.data() + bt * d;
        for (std::size_t j = 0; j < d; ++j) {
            const double dact =
                params.activation == Activation::Tanh ? 1.0 - zrow[j] * zrow[j] : 1.0;
            const double gpre = gzrow[j] * dact;
            gb1[j] += gpre;
            for (std::size_t i = 0; i < in; ++i) gw1[i * d + j] += xrow[i] * gpre;
        }
    }

    for (std::size_t idx = 0; idx < params.w1.size(); ++idx) params.w1[idx] -= learning_rate * gw1[idx];
    for (std::size_t idx = 0; idx < params.b1.size(); ++idx) params.b1[idx] -= learning_rate * gb1[idx];
    for (std::size_t idx = 0; idx < params.w2.size(); ++idx) params.w2[idx] -= learning_rate * gw2[idx];
    for (std::size_t idx = 0; idx < params.b2.size(); ++idx) params.b2[idx] -= learning_rate * gb2[idx];
    return loss;
}

TrainReport train(const TrainConfig& config, const EpochCallback& on_epoch) {
    if (config.epochs < 1) throw DomainError("train: epochs must be >= 1");
    if (config.sig_input_size < 2 || config.sig_input_size > 10) {
        throw DomainError("train: sig_input_size must be in [2, 10]");
    }
    Dataset data = synth_data(config);
    ModelParams params = ModelParams::init(config.sig_input_size, config.depth, config.kernel,
                                           config.activation,
                                           splitmix64(config.seed ^ kStudentStream));
    const auto batches = epoch_batch_sizes(config.n_samples, config.batch_size);
    const std::size_t in = static_cast<std::size_t>(kModelInputWidth);
    const std::size_t out = static_cast<std::size_t>(kModelOutputWidth);

    TrainReport report;
    report.config = config;
    const auto t0 = std::chrono::steady_clock::now();
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const auto e0 = std::chrono::steady_clock::now();
        double sq_sum = 0.0;
        std::size_t offset = 0;
        for (std::size_t bsize : batches) {
            const double loss = train_step(params, data.X.data() + offset * config.seq_len * in,
                                           data.Y.data() + offset * out, bsize, config.seq_len,
                                           config.learning_rate);
            if (!std::isfinite(loss)) {
                throw TrainingError("train: non-finite loss at epoch " + std::to_string(epoch),
                                    epoch);
            }
            sq_sum += loss * static_cast<double>(bsize);
            offset += bsize;
        }
        const auto e1 = std::chrono::steady_clock::now();
        report.epoch_losses.push_back(sq_sum / static_cast<double>(config.n_samples));
        report.epoch_seconds.push_back(std::chrono::duration<double>(e1 - e0).count());
        if (on_epoch) {
            on_epoch(epoch + 1, report.epoch_losses.back(), report.epoch_seconds.back());
        }
    }
    const auto t1 = std::chrono::steady_clock::now();
    report.total_seconds = std::chrono::duration<double>(t1 - t0).count();
    return report;
}

}  // namespace sigkit
