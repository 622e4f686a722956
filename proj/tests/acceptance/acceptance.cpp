// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Usage: hht_acceptance [criterion numbers...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <thread>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "hht/data.hpp"
#include "hht/eemd.hpp"
#include "hht/emd.hpp"
#include "hht/error.hpp"
#include "hht/io.hpp"
#include "hht/lstm.hpp"
#include "hht/pipeline.hpp"
#include "lstm_oracles.hpp"
#include "support.hpp"

using namespace hht;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

std::size_t hardware_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

// ---------------------------------------------------------------------------
// Random signal corpus shared by criteria 1 and 2.

std::vector<std::vector<double>> signal_corpus() {
    std::mt19937_64 rng(20240501);
    std::uniform_int_distribution<std::size_t> length(64, 4096);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::vector<double>> out;
    for (int s = 0; s < 50; ++s) {
        const std::size_t n = length(rng);
        std::vector<double> x(n, 0.0);
        const int tones = 1 + static_cast<int>(u(rng) * 4.0);
        for (int k = 0; k < tones; ++k) {
            const double period = 4.0 + u(rng) * static_cast<double>(n) / 3.0;
            const double amp = 0.2 + 2.0 * u(rng);
            const double phase = 2.0 * pi * u(rng);
            for (std::size_t t = 0; t < n; ++t) x[t] += amp * std::sin(2.0 * pi * static_cast<double>(t) / period + phase);
        }
        const double slope = (u(rng) - 0.5) * 4.0 / static_cast<double>(n);
        const double curve = (u(rng) - 0.5) * 2.0 / static_cast<double>(n * n);
        std::normal_distribution<double> noise(0.0, 0.5 * u(rng));
        for (std::size_t t = 0; t < n; ++t) {
            const double tt = static_cast<double>(t);
            x[t] += slope * tt + curve * tt * tt + noise(rng);
        }
        out.push_back(std::move(x));
    }
    return out;
}

struct Corpus {
    std::vector<std::vector<double>> signals;
    std::vector<ImfSet> sets;
    double seconds = 0.0;
};

const Corpus& corpus() {
    static const Corpus c = [] {
        Corpus c;
        c.signals = signal_corpus();
        const auto start = Clock::now();
        for (const auto& x : c.signals) c.sets.push_back(emd(x));
        c.seconds = seconds_since(start);
        return c;
    }();
    return c;
}

// ---------------------------------------------------------------------------

Outcome reconstruction_identity() {
    const auto& c = corpus();
    double worst = 0.0;
    for (std::size_t s = 0; s < c.signals.size(); ++s) {
        const auto back = c.sets[s].reconstruct();
        double err = 0.0, scale = 0.0;
        for (std::size_t t = 0; t < back.size(); ++t) {
            err = std::max(err, std::abs(back[t] - c.signals[s][t]));
            scale = std::max(scale, std::abs(c.signals[s][t]));
        }
        worst = std::max(worst, err / scale);
    }
    const bool pass = worst < 1e-8 && c.seconds < 30.0;
    return {pass, fmt("50 signals, worst relative error %.3g (< 1e-8), %.2f s (< 30 s)", worst, c.seconds)};
}

Outcome imf_conditions() {
    const auto& c = corpus();
    std::size_t checked = 0, flagged = 0, extrema_fail = 0, envelope_fail = 0;
    double worst_ratio = 0.0;
    for (const auto& set : c.sets) {
        for (const auto& imf : set.imfs) {
            if (!imf.converged) {
                ++flagged;
                continue;
            }
            ++checked;
            if (!satisfies_extrema_condition(imf.values)) ++extrema_fail;
            const std::size_t n = imf.values.size();
            const std::size_t lo = n / 10;
            const std::size_t hi = n - n / 10;
            double ratio = 0.0;
            try {
                const auto m = envelope_mean(imf.values, BoundaryPolicy::mirror);
                ratio = testing::rms(m, lo, hi) / testing::rms(imf.values, lo, hi);
            } catch (const InsufficientExtrema&) {
                ratio = std::numeric_limits<double>::infinity();
            }
            worst_ratio = std::max(worst_ratio, ratio);
            if (!(ratio < 0.1)) ++envelope_fail;
        }
    }
    const bool pass = extrema_fail == 0 && envelope_fail == 0 && checked > 0;
    return {pass, fmt("%zu IMFs checked (%zu flagged), extrema/crossing failures %zu, envelope failures %zu, "
                      "worst envelope ratio %.4f (< 0.1)",
                      checked, flagged, extrema_fail, envelope_fail, worst_ratio)};
}

Outcome mode_separation() {
    const std::size_t n = 2000;
    const auto t = testing::linspace(0.0, 10.0, n);
    std::vector<double> x(n), fast(n), slow(n);
    for (std::size_t i = 0; i < n; ++i) {
        slow[i] = std::sin(2.0 * pi * t[i]);
        fast[i] = std::sin(20.0 * pi * t[i]);
        x[i] = slow[i] + fast[i];
    }
    const auto set = emd(x);
    if (set.imfs.size() < 2) return {false, fmt("only %zu IMFs", set.imfs.size())};
    const double r1 = testing::pearson(set.imfs[0].values, fast, n / 10, n - n / 10);
    const double r2 = testing::pearson(set.imfs[1].values, slow, n / 10, n - n / 10);
    return {r1 > 0.95 && r2 > 0.95, fmt("corr(IMF1, fast tone) %.5f, corr(IMF2, slow tone) %.5f (> 0.95)", r1, r2)};
}

Outcome noise_cancellation() {
    const auto start = Clock::now();
    const std::size_t n = 1000;
    std::vector<double> tone(n);
    for (std::size_t i = 0; i < n; ++i) tone[i] = std::sin(2.0 * pi * static_cast<double>(i) / 8.0);
    const auto error_at = [&](std::size_t ensemble, std::uint64_t seed) {
        EemdConfig cfg;
        cfg.noise_amplitude = 0.2;
        cfg.ensemble_size = ensemble;
        cfg.seed = seed;
        const auto r = eemd(tone, cfg, hardware_threads());
        std::vector<double> d(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = r.imf_set.imfs.front().values[i] - tone[i];
        return testing::rms(d, n / 10, n - n / 10);
    };
    int wins = 0;
    std::ostringstream detail;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const double e10 = error_at(10, seed);
        const double e100 = error_at(100, seed);
        if (e100 < e10) ++wins;
        detail << fmt(" seed %llu: %.4f vs %.4f;", static_cast<unsigned long long>(seed), e100, e10);
    }
    const double secs = seconds_since(start);
    return {wins >= 3 && secs < 120.0,
            fmt("ensemble 100 beats 10 on %d/5 seeds (majority needed), %.1f s (< 120 s);", wins, secs) + detail.str()};
}

Outcome eemd_determinism() {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> x(1500);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = std::sin(2.0 * pi * static_cast<double>(i) / 37.0) + 0.01 * static_cast<double>(i) + 0.3 * g(rng);
    }
    EemdConfig cfg;
    cfg.ensemble_size = 40;
    cfg.seed = 1234;
    const auto serial = eemd(x, cfg, 1);
    bool same = true;
    std::vector<std::size_t> counts{2, 3, 8, hardware_threads(), 40};
    for (std::size_t threads : counts) {
        const auto r = eemd(x, cfg, threads);
        same = same && r.imf_set == serial.imf_set && r.trial_imf_counts == serial.trial_imf_counts;
    }
    const auto again = eemd(x, cfg, 1);
    same = same && again.imf_set == serial.imf_set;
    return {same, fmt("ensemble 40, seed 1234, threads {1,2,3,8,%zu,40}: %s", hardware_threads(),
                      same ? "bit-identical" : "results differ")};
}

Outcome gradient_check() {
    const auto start = Clock::now();
    std::mt19937_64 rng(606);
    std::uniform_int_distribution<std::size_t> input(1, 4), hidden(1, 6), steps(1, 6), outputs(1, 2);
    std::normal_distribution<double> g(0.0, 1.0);
    double worst = 0.0;
    std::string worst_where;
    std::size_t entries = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const LstmDims dims{input(rng), hidden(rng), outputs(rng)};
        const auto params = testing::random_params(dims, rng);
        const std::size_t T = steps(rng);
        Eigen::MatrixXd seq(static_cast<Eigen::Index>(T), static_cast<Eigen::Index>(dims.input_size));
        for (Eigen::Index r = 0; r < seq.rows(); ++r) {
            for (Eigen::Index c = 0; c < seq.cols(); ++c) seq(r, c) = g(rng);
        }
        std::vector<Eigen::VectorXd> targets;
        for (std::size_t t = 0; t < T; ++t) {
            Eigen::VectorXd y(static_cast<Eigen::Index>(dims.output_size));
            for (Eigen::Index k = 0; k < y.size(); ++k) y(k) = g(rng);
            targets.push_back(y);
        }
        const auto check = testing::check_gradients(params, seq, targets, 1e-5);
        entries += check.entries;
        if (check.max_relative_error > worst) {
            worst = check.max_relative_error;
            worst_where = fmt("trial %d %s", trial, check.worst_tensor.c_str());
        }
    }
    const double secs = seconds_since(start);
    return {worst < 1e-4 && secs < 60.0, fmt("20 configurations, %zu entries, worst relative error %.3g at %s "
                                             "(< 1e-4), %.2f s (< 60 s)",
                                             entries, worst, worst_where.c_str(), secs)};
}

Outcome lstm_trainability() {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    WindowedDataset d;
    d.lookback = 3;
    d.channels = 2;
    for (std::size_t k = 0; k < 32; ++k) {
        Eigen::MatrixXd w(3, 2);
        for (Eigen::Index r = 0; r < 3; ++r) {
            for (Eigen::Index c = 0; c < 2; ++c) w(r, c) = g(rng);
        }
        d.inputs.push_back(w);
        d.targets.push_back(Eigen::VectorXd::Constant(1, u(rng)));
        d.index_map.push_back(3 + k);
    }
    TrainConfig cfg;  // default rmsprop: lr 1e-3, decay 0.9, eps 1e-8
    cfg.epochs = 500;
    cfg.batch_size = 1;
    cfg.early_stop_patience = 0;
    cfg.shuffle_seed = 5;
    const auto init = init_params({2, 8, 1}, 11);
    const auto a = train(init, d, d, cfg);
    const auto b = train(init, d, d, cfg);
    std::size_t reached = 0;
    for (const auto& row : a.history) {
        if (row.train_loss < 1e-4) {
            reached = row.epoch;
            break;
        }
    }
    const double final_loss = dataset_loss(a.params, d);
    const bool deterministic = a.history == b.history && a.params == b.params;
    return {reached > 0 && final_loss < 1e-4 && deterministic,
            fmt("32 pairs, hidden 8, batch 1: MSE < 1e-4 first at epoch %zu (<= 500), best-params MSE %.3g, %s", reached,
                final_loss, deterministic ? "deterministic" : "NOT deterministic")};
}

Outcome end_to_end() {
    const auto start = Clock::now();
    std::mt19937_64 rng(2718);
    std::normal_distribution<double> noise(0.0, 0.05);
    TimeSeries s;
    s.interval = 1;
    s.values.resize(2000);
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        const double t = static_cast<double>(i);
        s.values[i] = std::sin(2.0 * pi * t / 50.0) + 0.001 * t + noise(rng);
    }
    const auto r = run_pipeline(s, PipelineConfig{}, hardware_threads());
    const double secs = seconds_since(start);
    const double model = r.test.metrics.rmse;
    const double base = r.test.baseline_metrics.rmse;
    return {model <= base && secs < 300.0,
            fmt("test RMSE %.5f vs persistence %.5f over %zu targets, %.1f s (< 300 s)", model, base,
                r.test.metrics.count, secs)};
}

Outcome default_cli_run() {
    testing::TempDir dir;
    const fs::path csv = fs::path(HHT_FIXTURE_DIR) / "btc_4h_synthetic.csv";
    const std::string in = csv.string();
    const auto run = [](std::vector<std::string> args) {
        args.insert(args.begin(), "hht-forecast");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        return cli::run(static_cast<int>(argv.size()), argv.data());
    };
    const auto d = [&](const char* name) { return (dir / name).string(); };
    std::vector<int> codes;
    codes.push_back(run({"decompose", in, "--out", d("decompose"), "--noise", "0.2", "--max-imfs", "7"}));
    codes.push_back(run({"train", in, "--out", d("train"), "--noise", "0.2", "--max-imfs", "7", "--lookback", "3",
                         "--channels", "7", "--train-frac", "0.7", "--val-frac", "0.15", "--test-frac", "0.15"}));
    const auto ck = (dir / "train" / "checkpoint.json").string();
    codes.push_back(run({"evaluate", in, "-c", ck, "--out", d("evaluate"), "--lookback", "3"}));
    codes.push_back(run({"predict", in, "-c", ck, "--out", d("predict")}));

    const std::vector<fs::path> artifacts{dir / "decompose" / "imfs.csv",     dir / "decompose" / "imfs.svg",
                                          dir / "train" / "checkpoint.json",  dir / "train" / "history.csv",
                                          dir / "evaluate" / "forecast.csv",  dir / "evaluate" / "metrics.json",
                                          dir / "evaluate" / "forecast.svg",  dir / "predict" / "prediction.csv"};
    std::size_t missing = 0;
    for (const auto& p : artifacts) missing += fs::exists(p) && fs::file_size(p) > 0 ? 0 : 1;
    for (const char* sub : {"decompose", "train", "evaluate", "predict"}) missing += fs::exists(dir / sub / "manifest.json") ? 0 : 1;
    const bool all_zero = std::all_of(codes.begin(), codes.end(), [](int c) { return c == 0; });

    std::size_t imfs = 0;
    if (fs::exists(artifacts[0])) imfs = read_imf_csv(artifacts[0]).set.imfs.size();
    return {all_zero && missing == 0 && imfs <= 7,
            fmt("%s: exit codes %d/%d/%d/%d, %zu IMF columns (<= 7), %zu missing artifacts", csv.filename().c_str(),
                codes[0], codes[1], codes[2], codes[3], imfs, missing)};
}

Outcome scaler_split_contracts() {
    std::mt19937_64 rng(10);
    std::normal_distribution<double> g(5000.0, 2000.0);
    double worst = 0.0;
    for (auto mode : {ScalerMode::standard, ScalerMode::variance}) {
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> v(257);
            for (auto& x : v) x = g(rng);
            const auto s = fit_scaler(v, mode);
            const auto back = unscale(s, scale(s, v));
            for (std::size_t i = 0; i < v.size(); ++i) worst = std::max(worst, std::abs(back[i] - v[i]) / std::max(1.0, std::abs(v[i])));
        }
    }

    std::size_t bad_partitions = 0;
    for (std::size_t n = 10; n <= 1000; ++n) {
        const auto r = split(n);
        const bool ok = r.train.begin == 0 && r.train.end == r.validation.begin && r.validation.end == r.test.begin &&
                        r.test.end == n && r.train.size() > 0 && r.validation.size() > 0 && r.test.size() > 0;
        bad_partitions += ok ? 0 : 1;
    }

    std::size_t datasets = 0, leaks = 0;
    for (std::size_t n : {20u, 97u, 500u}) {
        for (std::size_t lookback : {1u, 3u, 7u}) {
            for (std::size_t horizon : {1u, 2u, 6u}) {
                Channels ch(3, std::vector<double>(n));
                for (auto& c : ch) {
                    for (auto& x : c) x = g(rng);
                }
                const auto all = make_windows(ch, lookback, WindowTarget::recombined, horizon);
                const auto ranges = split(n);
                for (const auto& ds : {all, select_targets(all, ranges.train), select_targets(all, ranges.validation),
                                       select_targets(all, ranges.test),
                                       make_windows(ch, lookback, WindowTarget::per_channel, horizon)}) {
                    ++datasets;
                    leaks += is_leakage_free(ds) ? 0 : 1;
                }
            }
        }
    }
    const bool pass = worst < 1e-12 && bad_partitions == 0 && leaks == 0;
    return {pass, fmt("round-trip worst %.3g (< 1e-12, both modes); %zu bad partitions over lengths 10..1000; "
                      "%zu/%zu datasets leakage-free",
                      worst, bad_partitions, datasets - leaks, datasets)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"reconstruction identity", reconstruction_identity},
        {"IMF conditions", imf_conditions},
        {"mode separation", mode_separation},
        {"EEMD noise cancellation", noise_cancellation},
        {"EEMD determinism across thread counts", eemd_determinism},
        {"LSTM gradient check", gradient_check},
        {"LSTM trainability", lstm_trainability},
        {"end-to-end beats persistence", end_to_end},
        {"default-parameter CLI run", default_cli_run},
        {"scaler, split and leakage contracts", scaler_split_contracts},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const int number = static_cast<int>(k) + 1;
        if (!selected.empty() && !selected.count(number)) continue;
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] %2d. %s: %s\n", o.pass ? "PASS" : "FAIL", number, criteria[k].first, o.detail.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
