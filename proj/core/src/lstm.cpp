#include "hht/lstm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "hht/error.hpp"

namespace hht {

namespace {

Eigen::VectorXd sigmoid(const Eigen::VectorXd& z) {
    return z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

GateParams zero_gate(const LstmDims& d) {
    return {Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d.hidden_size), static_cast<Eigen::Index>(d.input_size)),
            Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d.hidden_size), static_cast<Eigen::Index>(d.hidden_size)),
            Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d.hidden_size))};
}

Eigen::VectorXd gate_preactivation(const GateParams& g, const Eigen::VectorXd& x, const Eigen::VectorXd& h) {
    return g.input_weights * x + g.recurrent_weights * h + g.bias;
}

void accumulate_gate(GateParams& grad, const Eigen::VectorXd& dz, const StepCache& c) {
    grad.input_weights.noalias() += dz * c.x.transpose();
    grad.recurrent_weights.noalias() += dz * c.h_prev.transpose();
    grad.bias += dz;
}

}  // namespace

LstmParams LstmParams::zeros(const LstmDims& dims) {
    LstmParams p;
    p.dims = dims;
    p.input_gate = zero_gate(dims);
    p.forget_gate = zero_gate(dims);
    p.output_gate = zero_gate(dims);
    p.candidate = zero_gate(dims);
    p.projection = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dims.output_size),
                                         static_cast<Eigen::Index>(dims.hidden_size));
    return p;
}

void LstmParams::check_shapes() const {
    const auto H = static_cast<Eigen::Index>(dims.hidden_size);
    const auto I = static_cast<Eigen::Index>(dims.input_size);
    const auto O = static_cast<Eigen::Index>(dims.output_size);
    if (H == 0 || I == 0 || O == 0) throw DimensionError("LSTM dimensions must be positive");
    const auto check = [](bool ok, const char* what) {
        if (!ok) throw DimensionError(std::string("tensor shape mismatch: ") + what);
    };
    for (const GateParams* g : {&input_gate, &forget_gate, &output_gate, &candidate}) {
        check(g->input_weights.rows() == H && g->input_weights.cols() == I, "gate input weights");
        check(g->recurrent_weights.rows() == H && g->recurrent_weights.cols() == H, "gate recurrent weights");
        check(g->bias.size() == H, "gate bias");
    }
    check(projection.rows() == O && projection.cols() == H, "projection");
}

bool LstmParams::all_finite() const {
    bool finite = true;
    for_each_tensor([&](const char*, const auto& t) { finite = finite && t.allFinite(); }, *this);
    return finite;
}

bool operator==(const LstmParams& a, const LstmParams& b) {
    if (!(a.dims == b.dims)) return false;
    bool equal = true;
    for_each_tensor(
        [&](const char*, const auto& x, const auto& y) {
            equal = equal && x.rows() == y.rows() && x.cols() == y.cols() && (x.array() == y.array()).all();
        },
        a, b);
    return equal;
}

CellState CellState::zeros(std::size_t hidden_size) {
    const auto H = static_cast<Eigen::Index>(hidden_size);
    return {Eigen::VectorXd::Zero(H), Eigen::VectorXd::Zero(H)};
}

std::pair<CellState, StepCache> cell_step(const LstmParams& params, const Eigen::VectorXd& x, const CellState& prev) {
    const auto H = static_cast<Eigen::Index>(params.dims.hidden_size);
    if (x.size() != static_cast<Eigen::Index>(params.dims.input_size)) {
        throw DimensionError("input has " + std::to_string(x.size()) + " features, model expects " +
                             std::to_string(params.dims.input_size));
    }
    if (prev.cell.size() != H || prev.hidden.size() != H) throw DimensionError("state size differs from hidden size");
    if (!x.allFinite()) throw NumericError("non-finite LSTM input");

    StepCache c;
    c.x = x;
    c.h_prev = prev.hidden;
    c.s_prev = prev.cell;
    c.input_gate = sigmoid(gate_preactivation(params.input_gate, x, prev.hidden));
    c.forget_gate = sigmoid(gate_preactivation(params.forget_gate, x, prev.hidden));
    c.output_gate = sigmoid(gate_preactivation(params.output_gate, x, prev.hidden));
    c.candidate = gate_preactivation(params.candidate, x, prev.hidden).array().tanh().matrix();

    CellState next;
    next.cell = c.forget_gate.cwiseProduct(prev.cell) + c.input_gate.cwiseProduct(c.candidate);
    c.tanh_cell = next.cell.array().tanh().matrix();
    next.hidden = c.output_gate.cwiseProduct(c.tanh_cell);
    c.hidden = next.hidden;
    return {std::move(next), std::move(c)};
}

ForwardPass forward(const LstmParams& params, const Eigen::MatrixXd& sequence, const CellState& initial) {
    if (sequence.rows() == 0) throw DimensionError("empty input sequence");
    ForwardPass pass;
    pass.outputs.reserve(static_cast<std::size_t>(sequence.rows()));
    pass.caches.reserve(static_cast<std::size_t>(sequence.rows()));
    CellState state = initial;
    for (Eigen::Index t = 0; t < sequence.rows(); ++t) {
        auto [next, cache] = cell_step(params, sequence.row(t).transpose(), state);
        pass.outputs.push_back(params.projection * next.hidden);
        pass.caches.push_back(std::move(cache));
        state = std::move(next);
    }
    pass.final_state = std::move(state);
    return pass;
}

ForwardPass forward(const LstmParams& params, const Eigen::MatrixXd& sequence) {
    return forward(params, sequence, CellState::zeros(params.dims.hidden_size));
}

LstmParams backward(const LstmParams& params, std::span<const StepCache> caches,
                    std::span<const Eigen::VectorXd> output_grads) {
    if (caches.size() != output_grads.size()) throw DimensionError("caches and output gradients differ in length");
    const auto H = static_cast<Eigen::Index>(params.dims.hidden_size);
    const auto O = static_cast<Eigen::Index>(params.dims.output_size);

    LstmParams grad = LstmParams::zeros(params.dims);
    Eigen::VectorXd dh_next = Eigen::VectorXd::Zero(H);
    Eigen::VectorXd ds_next = Eigen::VectorXd::Zero(H);

    for (std::size_t k = caches.size(); k-- > 0;) {
        const StepCache& c = caches[k];
        const Eigen::VectorXd& dy = output_grads[k];
        if (c.hidden.size() != H || c.x.size() != static_cast<Eigen::Index>(params.dims.input_size) || dy.size() != O) {
            throw DimensionError("cache does not match parameter dimensions");
        }

        grad.projection.noalias() += dy * c.hidden.transpose();
        const Eigen::VectorXd dh = params.projection.transpose() * dy + dh_next;

        const Eigen::ArrayXd tanh_s = c.tanh_cell.array();
        const Eigen::ArrayXd o = c.output_gate.array();
        const Eigen::ArrayXd i = c.input_gate.array();
        const Eigen::ArrayXd f = c.forget_gate.array();
        const Eigen::ArrayXd g = c.candidate.array();

        const Eigen::ArrayXd ds = dh.array() * o * (1.0 - tanh_s.square()) + ds_next.array();
        const Eigen::VectorXd dz_o = (dh.array() * tanh_s * o * (1.0 - o)).matrix();
        const Eigen::VectorXd dz_i = (ds * g * i * (1.0 - i)).matrix();
        const Eigen::VectorXd dz_f = (ds * c.s_prev.array() * f * (1.0 - f)).matrix();
        const Eigen::VectorXd dz_g = (ds * i * (1.0 - g.square())).matrix();
        ds_next = (ds * f).matrix();

        accumulate_gate(grad.input_gate, dz_i, c);
        accumulate_gate(grad.forget_gate, dz_f, c);
        accumulate_gate(grad.output_gate, dz_o, c);
        accumulate_gate(grad.candidate, dz_g, c);

        dh_next = params.input_gate.recurrent_weights.transpose() * dz_i +
                  params.forget_gate.recurrent_weights.transpose() * dz_f +
                  params.output_gate.recurrent_weights.transpose() * dz_o +
                  params.candidate.recurrent_weights.transpose() * dz_g;
    }
    return grad;
}

double mse_loss(std::span<const Eigen::VectorXd> predictions, std::span<const Eigen::VectorXd> targets) {
    if (predictions.size() != targets.size()) throw DimensionError("predictions and targets differ in length");
    if (predictions.empty()) throw DimensionError("mse_loss of an empty set");
    double total = 0.0;
    for (std::size_t k = 0; k < predictions.size(); ++k) {
        if (predictions[k].size() != targets[k].size() || predictions[k].size() == 0) {
            throw DimensionError("prediction and target dimensions differ");
        }
        total += (predictions[k] - targets[k]).squaredNorm() / static_cast<double>(predictions[k].size());
    }
    return total / static_cast<double>(predictions.size());
}

double mse_loss(std::span<const double> predictions, std::span<const double> targets) {
    if (predictions.size() != targets.size()) throw DimensionError("predictions and targets differ in length");
    if (predictions.empty()) throw DimensionError("mse_loss of an empty set");
    double total = 0.0;
    for (std::size_t k = 0; k < predictions.size(); ++k) {
        const double e = predictions[k] - targets[k];
        total += e * e;
    }
    return total / static_cast<double>(predictions.size());
}

// ---------------------------------------------------------------------------

void TrainConfig::validate() const {
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) throw ConfigError("learning rate must be >= 0");
    if (!(rmsprop_decay > 0.0 && rmsprop_decay < 1.0)) throw ConfigError("rmsprop decay must lie in (0, 1)");
    if (!(rmsprop_epsilon > 0.0)) throw ConfigError("rmsprop epsilon must be positive");
    if (batch_size < 1) throw ConfigError("batch size must be at least 1");
    if (!(max_grad_norm >= 0.0)) throw ConfigError("max gradient norm must be >= 0");
}

RmspropState RmspropState::zeros(const LstmDims& dims) {
    return {LstmParams::zeros(dims), 0};
}

void rmsprop_step(LstmParams& params, const LstmParams& gradients, RmspropState& state, const TrainConfig& config) {
    if (!gradients.all_finite()) throw NumericError("non-finite gradient");
    const double rho = config.rmsprop_decay;
    const double lr = config.learning_rate;
    const double eps = config.rmsprop_epsilon;
    for_each_tensor(
        [&](const char* name, auto& p, const auto& g, auto& a) {
            if (p.rows() != g.rows() || p.cols() != g.cols() || p.rows() != a.rows() || p.cols() != a.cols()) {
                throw DimensionError(std::string("rmsprop shape mismatch in ") + name);
            }
            a.array() = rho * a.array() + (1.0 - rho) * g.array().square();
            p.array() -= lr * g.array() / (a.array().sqrt() + eps);
        },
        params, gradients, state.mean_square);
    ++state.steps;
}

double clip_gradients(LstmParams& gradients, double max_norm) {
    double sq = 0.0;
    for_each_tensor([&](const char*, const auto& g) { sq += g.squaredNorm(); }, gradients);
    const double norm = std::sqrt(sq);
    if (max_norm > 0.0 && norm > max_norm) {
        const double s = max_norm / norm;
        for_each_tensor([&](const char*, auto& g) { g *= s; }, gradients);
    }
    return norm;
}

LstmParams init_params(const LstmDims& dims, std::uint64_t seed) {
    if (dims.input_size == 0 || dims.hidden_size == 0 || dims.output_size == 0) {
        throw DimensionError("LSTM dimensions must be positive");
    }
    LstmParams p = LstmParams::zeros(dims);
    const double k = 1.0 / std::sqrt(static_cast<double>(dims.hidden_size));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(-k, k);
    auto fill = [&](Eigen::MatrixXd& m) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = uniform(rng);
        }
    };
    for (GateParams* g : {&p.input_gate, &p.forget_gate, &p.output_gate, &p.candidate}) {
        fill(g->input_weights);
        fill(g->recurrent_weights);
    }
    fill(p.projection);
    p.forget_gate.bias.setOnes();
    return p;
}

Eigen::VectorXd predict(const LstmParams& params, const Eigen::MatrixXd& window) {
    return forward(params, window).outputs.back();
}

std::vector<Eigen::VectorXd> predict(const LstmParams& params, const WindowedDataset& dataset) {
    std::vector<Eigen::VectorXd> out;
    out.reserve(dataset.size());
    for (const auto& w : dataset.inputs) out.push_back(predict(params, w));
    return out;
}

double dataset_loss(const LstmParams& params, const WindowedDataset& dataset) {
    return mse_loss(predict(params, dataset), dataset.targets);
}

double batch_gradient(const LstmParams& params, const WindowedDataset& dataset, std::span<const std::size_t> batch,
                      LstmParams& gradients) {
    gradients = LstmParams::zeros(params.dims);
    if (batch.empty()) return 0.0;
    const auto O = static_cast<double>(params.dims.output_size);
    const double scale = 2.0 / (static_cast<double>(batch.size()) * O);
    double loss = 0.0;
    std::vector<Eigen::VectorXd> dy;
    for (const std::size_t j : batch) {
        const auto pass = forward(params, dataset.inputs[j]);
        const Eigen::VectorXd err = pass.outputs.back() - dataset.targets[j];
        loss += err.squaredNorm() / O;
        dy.assign(pass.outputs.size(), Eigen::VectorXd::Zero(err.size()));
        dy.back() = scale * err;
        const LstmParams g = backward(params, pass.caches, dy);
        for_each_tensor([](const char*, auto& acc, const auto& add) { acc += add; }, gradients, g);
    }
    return loss / static_cast<double>(batch.size());
}

TrainResult train(const LstmParams& initial, const WindowedDataset& train_set, const WindowedDataset& validation_set,
                  const TrainConfig& config) {
    config.validate();
    initial.check_shapes();
    if (train_set.empty() || validation_set.empty()) throw DimensionError("training needs non-empty datasets");

    TrainResult result;
    result.params = initial;
    result.optimizer = RmspropState::zeros(initial.dims);
    if (config.epochs == 0) return result;

    LstmParams params = initial;
    double best_validation = dataset_loss(params, validation_set);
    std::size_t stale = 0;

    std::mt19937_64 rng(config.shuffle_seed);
    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    LstmParams gradients;

    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        std::size_t batch_index = 0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size, ++batch_index) {
            const std::size_t stop = std::min(order.size(), start + config.batch_size);
            const std::span<const std::size_t> batch(order.data() + start, stop - start);
            const double loss = batch_gradient(params, train_set, batch, gradients);
            if (!std::isfinite(loss)) {
                throw NumericError("non-finite training loss at epoch " + std::to_string(epoch) + ", batch " +
                                   std::to_string(batch_index));
            }
            if (config.max_grad_norm > 0.0) clip_gradients(gradients, config.max_grad_norm);
            rmsprop_step(params, gradients, result.optimizer, config);
        }

        EpochLoss row{epoch, dataset_loss(params, train_set), dataset_loss(params, validation_set)};
        if (!std::isfinite(row.train_loss) || !std::isfinite(row.validation_loss)) {
            throw NumericError("non-finite loss after epoch " + std::to_string(epoch));
        }
        result.history.push_back(row);

        if (row.validation_loss < best_validation) {
            best_validation = row.validation_loss;
            result.params = params;
            result.best_epoch = epoch;
            stale = 0;
        } else if (config.early_stop_patience > 0 && ++stale >= config.early_stop_patience) {
            break;
        }
    }
    return result;
}

}  // namespace hht
