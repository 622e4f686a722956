#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "hht/eemd.hpp"
#include "hht/emd.hpp"
#include "hht/lstm.hpp"

namespace {

std::vector<double> test_signal(std::size_t n) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> noise(0.0, 0.1);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i);
        x[i] = std::sin(2.0 * std::numbers::pi * t / 50.0) + 0.4 * std::sin(2.0 * std::numbers::pi * t / 7.0) +
               0.001 * t + noise(rng);
    }
    return x;
}

void BM_Emd(benchmark::State& state) {
    const auto x = test_signal(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(hht::emd(x));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Emd)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_Eemd(benchmark::State& state) {
    const auto x = test_signal(2000);
    hht::EemdConfig cfg;
    cfg.ensemble_size = static_cast<std::size_t>(state.range(0));
    const auto threads = static_cast<std::size_t>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(hht::eemd(x, cfg, threads));
}
BENCHMARK(BM_Eemd)->Args({20, 1})->Args({100, 1})->Args({100, 4})->Unit(benchmark::kMillisecond);

struct LstmCase {
    hht::LstmParams params;
    Eigen::MatrixXd sequence;
    std::vector<Eigen::VectorXd> upstream;
};

LstmCase lstm_case(std::size_t hidden, std::size_t steps) {
    LstmCase c;
    c.params = hht::init_params({7, hidden, 1}, 2);
    c.sequence = Eigen::MatrixXd::Random(static_cast<Eigen::Index>(steps), 7);
    c.upstream.assign(steps, Eigen::VectorXd::Zero(1));
    c.upstream.back()(0) = 1.0;
    return c;
}

void BM_LstmForward(benchmark::State& state) {
    const auto c = lstm_case(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(hht::forward(c.params, c.sequence));
}
BENCHMARK(BM_LstmForward)->Args({32, 3})->Args({64, 3})->Args({64, 30});

void BM_LstmBackward(benchmark::State& state) {
    const auto c = lstm_case(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    const auto pass = hht::forward(c.params, c.sequence);
    for (auto _ : state) benchmark::DoNotOptimize(hht::backward(c.params, pass.caches, c.upstream));
}
BENCHMARK(BM_LstmBackward)->Args({32, 3})->Args({64, 3})->Args({64, 30});

}  // namespace
BENCHMARK_MAIN();
