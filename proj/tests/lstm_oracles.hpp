#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "hht/lstm.hpp"

namespace hht::testing {

/// Element-by-element LSTM cell with plain loops and no Eigen arithmetic.
struct ScalarCell {
    std::vector<double> cell, hidden, i, f, o, g;
};

inline double gate_sum(const GateParams& p, std::size_t r, const std::vector<double>& x, const std::vector<double>& h) {
    double z = p.bias(static_cast<Eigen::Index>(r));
    for (std::size_t c = 0; c < x.size(); ++c) z += p.input_weights(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * x[c];
    for (std::size_t c = 0; c < h.size(); ++c) {
        z += p.recurrent_weights(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * h[c];
    }
    return z;
}

inline ScalarCell scalar_cell(const LstmParams& p, const std::vector<double>& x, const std::vector<double>& h_prev,
                              const std::vector<double>& s_prev) {
    const std::size_t H = p.dims.hidden_size;
    ScalarCell out;
    out.cell.resize(H);
    out.hidden.resize(H);
    out.i.resize(H);
    out.f.resize(H);
    out.o.resize(H);
    out.g.resize(H);
    const auto sig = [](double z) { return 1.0 / (1.0 + std::exp(-z)); };
    for (std::size_t r = 0; r < H; ++r) {
        out.i[r] = sig(gate_sum(p.input_gate, r, x, h_prev));
        out.f[r] = sig(gate_sum(p.forget_gate, r, x, h_prev));
        out.o[r] = sig(gate_sum(p.output_gate, r, x, h_prev));
        out.g[r] = std::tanh(gate_sum(p.candidate, r, x, h_prev));
        out.cell[r] = out.f[r] * s_prev[r] + out.i[r] * out.g[r];
        out.hidden[r] = out.o[r] * std::tanh(out.cell[r]);
    }
    return out;
}

/// Unrolled oracle: projected output after each step of `seq` (rows = steps).
inline std::vector<std::vector<double>> scalar_forward(const LstmParams& p, const Eigen::MatrixXd& seq) {
    const std::size_t H = p.dims.hidden_size;
    std::vector<double> h(H, 0.0), s(H, 0.0);
    std::vector<std::vector<double>> outputs;
    for (Eigen::Index t = 0; t < seq.rows(); ++t) {
        std::vector<double> x(static_cast<std::size_t>(seq.cols()));
        for (Eigen::Index c = 0; c < seq.cols(); ++c) x[static_cast<std::size_t>(c)] = seq(t, c);
        const auto step = scalar_cell(p, x, h, s);
        h = step.hidden;
        s = step.cell;
        std::vector<double> y(p.dims.output_size, 0.0);
        for (std::size_t r = 0; r < y.size(); ++r) {
            for (std::size_t c = 0; c < H; ++c) y[r] += p.projection(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * h[c];
        }
        outputs.push_back(y);
    }
    return outputs;
}

inline LstmParams random_params(const LstmDims& dims, std::mt19937_64& rng, double spread = 0.8) {
    std::uniform_real_distribution<double> u(-spread, spread);
    LstmParams p = LstmParams::zeros(dims);
    for_each_tensor(
        [&](const char*, auto& t) {
            for (Eigen::Index r = 0; r < t.rows(); ++r) {
                for (Eigen::Index c = 0; c < t.cols(); ++c) t(r, c) = u(rng);
            }
        },
        p);
    return p;
}

/// Half sum of squared errors over every step: a loss touching all outputs.
inline double sequence_loss(const LstmParams& p, const Eigen::MatrixXd& seq, const std::vector<Eigen::VectorXd>& targets) {
    const auto pass = forward(p, seq);
    double loss = 0.0;
    for (std::size_t t = 0; t < targets.size(); ++t) loss += 0.5 * (pass.outputs[t] - targets[t]).squaredNorm();
    return loss;
}

struct GradientCheck {
    double max_relative_error = 0.0;
    std::string worst_tensor;
    std::size_t entries = 0;
};

/// Compares backward() against central differences of sequence_loss.
/// Relative error is |a - n| / max(|a|, |n|, floor).
inline GradientCheck check_gradients(const LstmParams& params, const Eigen::MatrixXd& seq,
                                     const std::vector<Eigen::VectorXd>& targets, double eps = 1e-5,
                                     double floor = 1e-6) {
    const auto pass = forward(params, seq);
    std::vector<Eigen::VectorXd> dy;
    for (std::size_t t = 0; t < targets.size(); ++t) dy.push_back(pass.outputs[t] - targets[t]);
    LstmParams analytic = backward(params, pass.caches, dy);

    GradientCheck result;
    LstmParams probe = params;
    for_each_tensor(
        [&](const char* name, auto& w, const auto& g) {
            for (Eigen::Index r = 0; r < w.rows(); ++r) {
                for (Eigen::Index c = 0; c < w.cols(); ++c) {
                    const double saved = w(r, c);
                    w(r, c) = saved + eps;
                    const double up = sequence_loss(probe, seq, targets);
                    w(r, c) = saved - eps;
                    const double down = sequence_loss(probe, seq, targets);
                    w(r, c) = saved;
                    const double numeric = (up - down) / (2.0 * eps);
                    const double a = g(r, c);
                    const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
                    if (rel > result.max_relative_error) {
                        result.max_relative_error = rel;
                        result.worst_tensor = name;
                    }
                    ++result.entries;
                }
            }
        },
        probe, analytic);
    return result;
}

}  // namespace hht::testing
