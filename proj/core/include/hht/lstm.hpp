#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "hht/dataset.hpp"

namespace hht {

struct LstmDims {
    std::size_t input_size = 0;
    std::size_t hidden_size = 32;
    std::size_t output_size = 1;

    friend bool operator==(const LstmDims&, const LstmDims&) = default;
};

/// Weights of one gate: pre-activation = input_weights * x + recurrent_weights * h + bias.
struct GateParams {
    Eigen::MatrixXd input_weights;      // hidden x input
    Eigen::MatrixXd recurrent_weights;  // hidden x hidden
    Eigen::VectorXd bias;               // hidden
};

/// Single-layer LSTM with a linear output projection. The same type holds
/// gradients and optimizer accumulators.
struct LstmParams {
    LstmDims dims;
    GateParams input_gate;
    GateParams forget_gate;
    GateParams output_gate;
    GateParams candidate;
    Eigen::MatrixXd projection;  // output x hidden

    static LstmParams zeros(const LstmDims& dims);

    /// Throws DimensionError when any tensor disagrees with `dims`.
    void check_shapes() const;
    bool all_finite() const;
};

bool operator==(const LstmParams& a, const LstmParams& b);

/// Calls f(name, tensor...) on corresponding tensors of each argument, in a
/// fixed order.
template <typename F, typename... P>
void for_each_tensor(F&& f, P&... params) {
    f("input_gate.input_weights", params.input_gate.input_weights...);
    f("input_gate.recurrent_weights", params.input_gate.recurrent_weights...);
    f("input_gate.bias", params.input_gate.bias...);
    f("forget_gate.input_weights", params.forget_gate.input_weights...);
    f("forget_gate.recurrent_weights", params.forget_gate.recurrent_weights...);
    f("forget_gate.bias", params.forget_gate.bias...);
    f("output_gate.input_weights", params.output_gate.input_weights...);
    f("output_gate.recurrent_weights", params.output_gate.recurrent_weights...);
    f("output_gate.bias", params.output_gate.bias...);
    f("candidate.input_weights", params.candidate.input_weights...);
    f("candidate.recurrent_weights", params.candidate.recurrent_weights...);
    f("candidate.bias", params.candidate.bias...);
    f("projection", params.projection...);
}

struct CellState {
    Eigen::VectorXd cell;
    Eigen::VectorXd hidden;

    static CellState zeros(std::size_t hidden_size);
};

/// Intermediates of one cell step kept for the backward pass.
struct StepCache {
    Eigen::VectorXd x;
    Eigen::VectorXd h_prev;
    Eigen::VectorXd s_prev;
    Eigen::VectorXd input_gate;
    Eigen::VectorXd forget_gate;
    Eigen::VectorXd output_gate;
    Eigen::VectorXd candidate;
    Eigen::VectorXd tanh_cell;
    Eigen::VectorXd hidden;
};

std::pair<CellState, StepCache> cell_step(const LstmParams& params, const Eigen::VectorXd& x, const CellState& prev);

struct ForwardPass {
    std::vector<Eigen::VectorXd> outputs;  // projection of the hidden state per step
    CellState final_state;
    std::vector<StepCache> caches;
};

/// Runs the cell over `sequence` (one row per time step).
ForwardPass forward(const LstmParams& params, const Eigen::MatrixXd& sequence, const CellState& initial);
ForwardPass forward(const LstmParams& params, const Eigen::MatrixXd& sequence);

/// Exact gradients by backpropagation through time. `output_grads[t]` is
/// d loss / d output_t; the initial state is treated as a constant.
LstmParams backward(const LstmParams& params, std::span<const StepCache> caches,
                    std::span<const Eigen::VectorXd> output_grads);

/// Mean over samples of the squared error averaged over output dimensions.
double mse_loss(std::span<const Eigen::VectorXd> predictions, std::span<const Eigen::VectorXd> targets);
double mse_loss(std::span<const double> predictions, std::span<const double> targets);

struct TrainConfig {
    double learning_rate = 1e-3;
    double rmsprop_decay = 0.9;
    double rmsprop_epsilon = 1e-8;
    std::size_t epochs = 100;
    std::size_t batch_size = 32;
    std::uint64_t shuffle_seed = 0;
    /// Stop after this many epochs without validation improvement; 0 disables.
    std::size_t early_stop_patience = 20;
    /// Rescale the gradient when its global L2 norm exceeds this; 0 disables.
    double max_grad_norm = 0.0;

    void validate() const;
};

struct RmspropState {
    LstmParams mean_square;  // per-entry decayed average of squared gradients
    std::size_t steps = 0;

    static RmspropState zeros(const LstmDims& dims);
};

/// a <- decay * a + (1 - decay) * g^2; p <- p - lr * g / (sqrt(a) + eps).
void rmsprop_step(LstmParams& params, const LstmParams& gradients, RmspropState& state, const TrainConfig& config);

/// Scales `gradients` in place so their global L2 norm is at most max_norm.
/// Returns the norm before clipping.
double clip_gradients(LstmParams& gradients, double max_norm);

/// Initialises weights uniformly in [-k, k], k = 1/sqrt(hidden); biases are
/// zero except the forget gate's, which is 1.
LstmParams init_params(const LstmDims& dims, std::uint64_t seed);

Eigen::VectorXd predict(const LstmParams& params, const Eigen::MatrixXd& window);
std::vector<Eigen::VectorXd> predict(const LstmParams& params, const WindowedDataset& dataset);

/// Loss and gradient of the last-step MSE over a batch of samples.
double batch_gradient(const LstmParams& params, const WindowedDataset& dataset, std::span<const std::size_t> batch,
                      LstmParams& gradients);

struct EpochLoss {
    std::size_t epoch = 0;  // 1-based
    double train_loss = 0.0;
    double validation_loss = 0.0;

    friend bool operator==(const EpochLoss&, const EpochLoss&) = default;
};

struct TrainResult {
    LstmParams params;  // best validation loss seen, including the initial params
    std::vector<EpochLoss> history;
    RmspropState optimizer;
    std::size_t best_epoch = 0;  // 0 when no epoch improved on the initial params
};

TrainResult train(const LstmParams& initial, const WindowedDataset& train_set, const WindowedDataset& validation_set,
                  const TrainConfig& config);

double dataset_loss(const LstmParams& params, const WindowedDataset& dataset);

// ---------------------------------------------------------------------------
// Checkpoints (JSON, row-major float64 tensors)

struct ModelCheckpoint {
    LstmParams params;
    RmspropState optimizer;
    TrainConfig config;
};

void save_model(const std::filesystem::path& path, const ModelCheckpoint& checkpoint);

/// Loads a checkpoint; throws DimensionError when `expected` is given and
/// does not match the stored dims.
ModelCheckpoint load_model(const std::filesystem::path& path, const std::optional<LstmDims>& expected = std::nullopt);

}  // namespace hht
