#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hht/data.hpp"
#include "hht/dataset.hpp"
#include "hht/eemd.hpp"
#include "hht/lstm.hpp"

namespace hht {

using Channels = std::vector<std::vector<double>>;

/// joint:   one model over all channels predicting the recombined price.
/// per_imf: one univariate model per channel; channel forecasts are summed.
enum class Strategy { joint, per_imf };

Strategy parse_strategy(std::string_view name);
std::string_view to_string(Strategy strategy) noexcept;

/// level: the network output is the scaled value at t+horizon.
/// delta: the network output is the scaled change from t to t+horizon,
///        added back onto the last observed value.
enum class TargetForm { level, delta };

TargetForm parse_target_form(std::string_view name);
std::string_view to_string(TargetForm form) noexcept;

struct PipelineConfig {
    EemdConfig eemd{};
    ScalerMode scaler_mode = ScalerMode::standard;
    SplitSpec split{};
    std::size_t lookback = 3;
    std::size_t horizon = 1;
    /// Decomposition channels fed to the model; surplus low-frequency IMFs
    /// are merged into the residue channel.
    std::size_t max_channels = 7;
    std::size_t hidden_size = 32;
    std::uint64_t init_seed = 0;
    TrainConfig train{};
    Strategy strategy = Strategy::joint;
    TargetForm target_form = TargetForm::delta;

    void validate() const;
};

std::string pipeline_config_to_json(const PipelineConfig& config);
PipelineConfig pipeline_config_from_json(std::string_view text);

// ---------------------------------------------------------------------------
// Windowing

/// recombined:  target is the element-wise sum of all channels.
/// per_channel: target vector holds every channel's next value.
enum class WindowTarget { recombined, per_channel };

/// Window at position t stacks samples t-lookback+1..t of every channel; the
/// target is taken at t+horizon.
WindowedDataset make_windows(const Channels& channels, std::size_t lookback, WindowTarget target,
                             std::size_t horizon = 1);

/// As above with an explicit target series aligned with the channels.
WindowedDataset make_windows(const Channels& channels, std::size_t lookback, std::span<const double> target,
                             std::size_t horizon = 1);

/// Samples whose target index falls inside `range`.
WindowedDataset select_targets(const WindowedDataset& dataset, const IndexRange& range);

/// True when every input row precedes its target in time.
bool is_leakage_free(const WindowedDataset& dataset);

/// IMFs followed by the residue; when that exceeds max_channels the trailing
/// IMFs are summed into the residue so the channels still add up to the source.
Channels decomposition_channels(const ImfSet& set, std::size_t max_channels);

// ---------------------------------------------------------------------------
// Evaluation

struct Metrics {
    double rmse = 0.0;
    double mae = 0.0;
    std::optional<double> mape;                  // absent when every actual is zero
    std::optional<double> directional_accuracy;  // absent when no step has a nonzero actual move
    std::size_t count = 0;
};

Metrics evaluate(std::span<const double> predictions, std::span<const double> actuals);

/// Naive forecast y_hat[t+1] = y[t]: returns actuals[0..n-2] for targets actuals[1..n-1].
std::vector<double> persistence_baseline(std::span<const double> actuals);

struct ForecastReport {
    std::string split_name;
    std::vector<std::size_t> index_map;
    std::vector<double> predictions;  // price units
    std::vector<double> actuals;
    std::vector<double> baseline;     // persistence forecast at the same indices
    Metrics metrics;
    Metrics baseline_metrics;
    Metrics scaled_metrics;           // predictions and actuals in scaled target units
};

void write_forecast_csv(const std::filesystem::path& path, const ForecastReport& report);
std::string metrics_to_json(const Metrics& metrics);

// ---------------------------------------------------------------------------
// Training and forecasting

struct TrainedModel {
    LstmParams params;
    RmspropState optimizer;
    std::vector<EpochLoss> history;
    std::size_t best_epoch = 0;
};

/// Everything needed to forecast from a set of decomposition channels.
struct ForecastModel {
    PipelineConfig config;
    std::size_t channel_count = 0;
    std::vector<ScalerState> channel_scalers;
    ScalerState target_scaler;
    std::vector<TrainedModel> models;  // one for joint, one per channel for per_imf
};

struct Forecast {
    std::vector<std::size_t> index_map;
    std::vector<double> predictions;          // price units
    Channels channel_predictions;             // per_imf only: unscaled, one vector per channel
};

/// Forecasts the value at each target index from the windows ending
/// `horizon` steps earlier. Targets may lie past the end of the channels.
Forecast forecast(const ForecastModel& model, const Channels& channels, std::span<const std::size_t> target_indices);

ForecastReport make_report(std::string split_name, const ForecastModel& model, const Forecast& forecast,
                           std::span<const double> prices);

struct PipelineResult {
    EemdResult decomposition;
    Channels channels;
    SplitRanges ranges;
    ForecastModel model;
    ForecastReport train;
    ForecastReport validation;
    ForecastReport test;
};

/// Decompose, scale, window, train and evaluate. Errors are rethrown as
/// StageError tagged with the failing stage.
PipelineResult run_pipeline(const TimeSeries& prices, const PipelineConfig& config, std::size_t threads = 1);

/// Same as run_pipeline with a precomputed decomposition of `prices`.
PipelineResult run_pipeline(const TimeSeries& prices, EemdResult decomposition, const PipelineConfig& config,
                            std::size_t threads = 1);

struct ExpectedShape {
    std::optional<std::size_t> hidden_size;
    std::optional<std::size_t> lookback;
    std::optional<std::size_t> channel_count;
};

void save_forecast_model(const std::filesystem::path& path, const ForecastModel& model);
ForecastModel load_forecast_model(const std::filesystem::path& path, const ExpectedShape& expected = {});

}  // namespace hht
