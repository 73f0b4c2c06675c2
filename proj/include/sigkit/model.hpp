#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sigkit/kernels.hpp"

namespace sigkit {

inline constexpr int kModelInputWidth = 20;
inline constexpr int kModelOutputWidth = 10;

enum class Activation { Tanh, Identity };

const char* activation_name(Activation activation);

/// Inverse of activation_name; throws DomainError on unknown names.
Activation activation_from_name(const std::string& name);

/// Dense(20 -> d) -> signature(depth) -> Dense(D -> 10).
struct ModelParams {
    int sig_input_size = 0;  // d
    int depth = 0;
    KernelKind kernel = KernelKind::Sequential;
    Activation activation = Activation::Tanh;
    std::vector<double> w1;  // (20, d)
    std::vector<double> b1;  // (d)
    std::vector<double> w2;  // (D, 10)
    std::vector<double> b2;  // (10)

    /// Uniform init in [-1/sqrt(fan_in), +1/sqrt(fan_in)], seed-controlled.
    static ModelParams init(int sig_input_size, int depth, KernelKind kernel,
                            Activation activation, std::uint64_t seed);
};

struct TrainConfig {
    std::size_t n_samples = 1024;
    std::size_t seq_len = 100;
    int sig_input_size = 4;
    int depth = 3;
    std::size_t batch_size = 128;
    int epochs = 10;
    double learning_rate = 0.05;
    std::uint64_t seed = 42;
    KernelKind kernel = KernelKind::Auto;
    Activation activation = Activation::Tanh;
};

/// Synthetic inputs X (n, L, 20) and teacher targets Y (n, 10).
struct Dataset {
    std::size_t n = 0;
    std::size_t seq_len = 0;
    std::vector<double> X;
    std::vector<double> Y;
};

struct TrainReport {
    TrainConfig config;
    std::vector<double> epoch_losses;
    std::vector<double> epoch_seconds;
    double total_seconds = 0.0;
};

/// Mini-batch sizes for one epoch: ceil(n/batch) batches, the last one of
/// size n mod batch when that is nonzero.
std::vector<std::size_t> epoch_batch_sizes(std::size_t n_samples, std::size_t batch_size);

/// X ~ standard normal; Y from a frozen random teacher of the same
/// architecture, so the training objective is reducible. Deterministic
/// for a fixed seed (the teacher always runs the sequential kernel, so
/// targets do not depend on the configured kernel).
Dataset synth_data(const TrainConfig& config);

/// Full model forward pass; X is (batch, seq_len, 20), returns (batch, 10).
std::vector<double> forward(const ModelParams& params, const std::vector<double>& X,
                            std::size_t batch, std::size_t seq_len);

/// One SGD step on mean-squared error over the given mini-batch. Returns
/// the batch loss (mean over batch rows and output channels) measured
/// before the update.
double train_step(ModelParams& params, const double* X, const double* Y, std::size_t batch,
                  std::size_t seq_len, double learning_rate);

/// Called after each epoch with (1-based epoch, mean loss, seconds).
using EpochCallback = std::function<void(int, double, double)>;

/// Full training loop: `epochs` passes over all mini-batches, including
/// the partial final one. Throws TrainingError when the loss goes
/// non-finite. Wall-clock covers the training loop only.
TrainReport train(const TrainConfig& config, const EpochCallback& on_epoch = {});

}  // namespace sigkit
