#include "hht/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <utility>

#include "hht/error.hpp"
#include "hht/io.hpp"
#include "hht/parallel.hpp"
#include "json_io.hpp"

namespace hht {

using detail::json;

Strategy parse_strategy(std::string_view name) {
    if (name == "joint") return Strategy::joint;
    if (name == "per-imf" || name == "per_imf") return Strategy::per_imf;
    throw ConfigError("unknown strategy '" + std::string(name) + "' (expected joint or per-imf)");
}

std::string_view to_string(Strategy strategy) noexcept {
    return strategy == Strategy::joint ? "joint" : "per-imf";
}

TargetForm parse_target_form(std::string_view name) {
    if (name == "level") return TargetForm::level;
    if (name == "delta") return TargetForm::delta;
    throw ConfigError("unknown target form '" + std::string(name) + "' (expected level or delta)");
}

std::string_view to_string(TargetForm form) noexcept {
    return form == TargetForm::level ? "level" : "delta";
}

void PipelineConfig::validate() const {
    eemd.validate();
    split.validate();
    train.validate();
    if (lookback < 1) throw ConfigError("lookback must be at least 1");
    if (horizon < 1) throw ConfigError("horizon must be at least 1");
    if (max_channels < 1) throw ConfigError("max_channels must be at least 1");
    if (hidden_size < 1) throw ConfigError("hidden size must be at least 1");
}

namespace {

json config_to_json(const PipelineConfig& c) {
    return {{"eemd", detail::to_json(c.eemd)},
            {"scaler_mode", std::string(to_string(c.scaler_mode))},
            {"split", detail::to_json(c.split)},
            {"lookback", c.lookback},
            {"horizon", c.horizon},
            {"max_channels", c.max_channels},
            {"hidden_size", c.hidden_size},
            {"init_seed", c.init_seed},
            {"train", detail::to_json(c.train)},
            {"strategy", std::string(to_string(c.strategy))},
            {"target_form", std::string(to_string(c.target_form))}};
}

PipelineConfig config_from_json(const json& j) {
    PipelineConfig c;
    try {
        if (j.contains("eemd")) c.eemd = detail::eemd_config_from_json(j.at("eemd"));
        if (j.contains("scaler_mode")) c.scaler_mode = parse_scaler_mode(j.at("scaler_mode").get<std::string>());
        if (j.contains("split")) c.split = detail::split_from_json(j.at("split"));
        c.lookback = j.value("lookback", c.lookback);
        c.horizon = j.value("horizon", c.horizon);
        c.max_channels = j.value("max_channels", c.max_channels);
        c.hidden_size = j.value("hidden_size", c.hidden_size);
        c.init_seed = j.value("init_seed", c.init_seed);
        if (j.contains("train")) c.train = detail::train_config_from_json(j.at("train"));
        if (j.contains("strategy")) c.strategy = parse_strategy(j.at("strategy").get<std::string>());
        if (j.contains("target_form")) c.target_form = parse_target_form(j.at("target_form").get<std::string>());
    } catch (const json::exception& e) {
        throw DataError(std::string("bad pipeline config: ") + e.what());
    }
    return c;
}

template <typename F>
auto in_stage(const char* stage, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError(stage, e.what());
    }
}

Eigen::MatrixXd window_at(const Channels& channels, std::size_t end, std::size_t lookback) {
    Eigen::MatrixXd w(static_cast<Eigen::Index>(lookback), static_cast<Eigen::Index>(channels.size()));
    const std::size_t first = end + 1 - lookback;
    for (std::size_t r = 0; r < lookback; ++r) {
        for (std::size_t c = 0; c < channels.size(); ++c) {
            w(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = channels[c][first + r];
        }
    }
    return w;
}

/// Training target aligned with the channels: the scaled series itself, or
/// its change over `horizon` steps (zero where undefined).
std::vector<double> target_series(std::span<const double> scaled, const PipelineConfig& config) {
    std::vector<double> out(scaled.begin(), scaled.end());
    if (config.target_form == TargetForm::delta) {
        for (std::size_t j = out.size(); j-- > 0;) out[j] = j >= config.horizon ? scaled[j] - scaled[j - config.horizon] : 0.0;
    }
    return out;
}

void check_channels(const Channels& channels) {
    if (channels.empty()) throw DimensionError("no channels supplied");
    for (const auto& c : channels) {
        if (c.size() != channels.front().size()) throw DimensionError("channels differ in length");
    }
}

}  // namespace

std::string pipeline_config_to_json(const PipelineConfig& config) {
    return config_to_json(config).dump(2);
}

PipelineConfig pipeline_config_from_json(std::string_view text) {
    try {
        return config_from_json(json::parse(text));
    } catch (const json::exception& e) {
        throw DataError(std::string("bad pipeline config: ") + e.what());
    }
}

// ---------------------------------------------------------------------------

WindowedDataset make_windows(const Channels& channels, std::size_t lookback, std::span<const double> target,
                             std::size_t horizon) {
    check_channels(channels);
    if (lookback < 1 || horizon < 1) throw ConfigError("lookback and horizon must be at least 1");
    const std::size_t n = channels.front().size();
    if (target.size() != n) throw DimensionError("target series length differs from channel length");
    if (n < lookback + horizon) {
        throw DataError("series of length " + std::to_string(n) + " is too short for lookback " +
                        std::to_string(lookback));
    }

    WindowedDataset ds;
    ds.lookback = lookback;
    ds.channels = channels.size();
    ds.horizon = horizon;
    const std::size_t count = n - lookback - horizon + 1;
    ds.inputs.reserve(count);
    ds.targets.reserve(count);
    ds.index_map.reserve(count);
    for (std::size_t end = lookback - 1; end + horizon < n; ++end) {
        ds.inputs.push_back(window_at(channels, end, lookback));
        ds.targets.push_back(Eigen::VectorXd::Constant(1, target[end + horizon]));
        ds.index_map.push_back(end + horizon);
    }
    return ds;
}

WindowedDataset make_windows(const Channels& channels, std::size_t lookback, WindowTarget target,
                             std::size_t horizon) {
    check_channels(channels);
    const std::size_t n = channels.front().size();
    if (target == WindowTarget::recombined) {
        std::vector<double> sum(n, 0.0);
        for (const auto& c : channels) {
            for (std::size_t t = 0; t < n; ++t) sum[t] += c[t];
        }
        return make_windows(channels, lookback, sum, horizon);
    }

    auto ds = make_windows(channels, lookback, channels.front(), horizon);
    for (std::size_t j = 0; j < ds.size(); ++j) {
        Eigen::VectorXd y(static_cast<Eigen::Index>(channels.size()));
        for (std::size_t c = 0; c < channels.size(); ++c) y(static_cast<Eigen::Index>(c)) = channels[c][ds.index_map[j]];
        ds.targets[j] = std::move(y);
    }
    return ds;
}

WindowedDataset select_targets(const WindowedDataset& dataset, const IndexRange& range) {
    WindowedDataset out;
    out.lookback = dataset.lookback;
    out.channels = dataset.channels;
    out.horizon = dataset.horizon;
    for (std::size_t j = 0; j < dataset.size(); ++j) {
        if (!range.contains(dataset.index_map[j])) continue;
        out.inputs.push_back(dataset.inputs[j]);
        out.targets.push_back(dataset.targets[j]);
        out.index_map.push_back(dataset.index_map[j]);
    }
    return out;
}

bool is_leakage_free(const WindowedDataset& dataset) {
    if (dataset.inputs.size() != dataset.targets.size() || dataset.index_map.size() != dataset.inputs.size()) {
        return false;
    }
    for (std::size_t j = 0; j < dataset.size(); ++j) {
        if (dataset.index_map[j] < dataset.horizon + dataset.lookback - 1) return false;
        if (!(dataset.last_input_index(j) < dataset.index_map[j])) return false;
        if (dataset.inputs[j].rows() != static_cast<Eigen::Index>(dataset.lookback)) return false;
    }
    return true;
}

Channels decomposition_channels(const ImfSet& set, std::size_t max_channels) {
    if (max_channels < 1) throw ConfigError("max_channels must be at least 1");
    const std::size_t kept = std::min(set.imfs.size(), max_channels - 1);
    Channels channels;
    channels.reserve(kept + 1);
    for (std::size_t k = 0; k < kept; ++k) channels.push_back(set.imfs[k].values);
    std::vector<double> trend = set.residue;
    for (std::size_t k = kept; k < set.imfs.size(); ++k) {
        for (std::size_t t = 0; t < trend.size(); ++t) trend[t] += set.imfs[k].values[t];
    }
    channels.push_back(std::move(trend));
    return channels;
}

// ---------------------------------------------------------------------------

Metrics evaluate(std::span<const double> predictions, std::span<const double> actuals) {
    if (predictions.size() != actuals.size()) throw DimensionError("predictions and actuals differ in length");
    if (predictions.empty()) throw DataError("cannot evaluate an empty forecast");

    Metrics m;
    m.count = predictions.size();
    double se = 0.0;
    double ae = 0.0;
    double ape = 0.0;
    std::size_t ape_count = 0;
    for (std::size_t t = 0; t < predictions.size(); ++t) {
        const double e = predictions[t] - actuals[t];
        se += e * e;
        ae += std::abs(e);
        if (actuals[t] != 0.0) {
            ape += std::abs(e) / std::abs(actuals[t]);
            ++ape_count;
        }
    }
    const auto n = static_cast<double>(predictions.size());
    m.rmse = std::sqrt(se / n);
    m.mae = ae / n;
    if (ape_count > 0) m.mape = ape / static_cast<double>(ape_count);

    std::size_t hits = 0;
    std::size_t moves = 0;
    const auto sign = [](double v) { return (v > 0.0) - (v < 0.0); };
    for (std::size_t t = 1; t < predictions.size(); ++t) {
        const int actual_move = sign(actuals[t] - actuals[t - 1]);
        if (actual_move == 0) continue;
        ++moves;
        if (sign(predictions[t] - predictions[t - 1]) == actual_move) ++hits;
    }
    if (moves > 0) m.directional_accuracy = static_cast<double>(hits) / static_cast<double>(moves);
    return m;
}

std::vector<double> persistence_baseline(std::span<const double> actuals) {
    if (actuals.size() < 2) throw DataError("persistence baseline needs at least 2 values");
    return {actuals.begin(), actuals.end() - 1};
}

std::string metrics_to_json(const Metrics& m) {
    json j = {{"rmse", m.rmse}, {"mae", m.mae}, {"count", m.count}};
    j["mape"] = m.mape ? json(*m.mape) : json(nullptr);
    j["directional_accuracy"] = m.directional_accuracy ? json(*m.directional_accuracy) : json(nullptr);
    return j.dump();
}

void write_forecast_csv(const std::filesystem::path& path, const ForecastReport& report) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << "index,actual,predicted\n";
    for (std::size_t k = 0; k < report.index_map.size(); ++k) {
        out << report.index_map[k] << ',' << format_double(report.actuals[k]) << ','
            << format_double(report.predictions[k]) << '\n';
    }
}

// ---------------------------------------------------------------------------

Forecast forecast(const ForecastModel& model, const Channels& channels, std::span<const std::size_t> target_indices) {
    check_channels(channels);
    if (channels.size() != model.channel_count || model.channel_scalers.size() != model.channel_count) {
        throw DimensionError("model expects " + std::to_string(model.channel_count) + " channels, got " +
                             std::to_string(channels.size()));
    }
    const auto& cfg = model.config;
    const std::size_t n = channels.front().size();

    Channels scaled(channels.size());
    for (std::size_t c = 0; c < channels.size(); ++c) scaled[c] = scale(model.channel_scalers[c], channels[c]);

    Forecast out;
    out.index_map.assign(target_indices.begin(), target_indices.end());
    out.predictions.assign(target_indices.size(), 0.0);
    if (cfg.strategy == Strategy::per_imf) {
        if (model.models.size() != channels.size()) throw DimensionError("per-imf model count differs from channels");
        out.channel_predictions.assign(channels.size(), std::vector<double>(target_indices.size(), 0.0));
    } else if (model.models.size() != 1) {
        throw DimensionError("joint strategy expects exactly one model");
    }

    const bool delta = cfg.target_form == TargetForm::delta;
    std::vector<double> scaled_sum;
    if (delta && cfg.strategy == Strategy::joint) {
        std::vector<double> sum(n, 0.0);
        for (const auto& c : channels) {
            for (std::size_t t = 0; t < n; ++t) sum[t] += c[t];
        }
        scaled_sum = scale(model.target_scaler, sum);
    }

    for (std::size_t k = 0; k < target_indices.size(); ++k) {
        const std::size_t j = target_indices[k];
        if (j < cfg.horizon + cfg.lookback - 1 || j - cfg.horizon >= n) {
            throw DataError("no complete input window for target index " + std::to_string(j));
        }
        const std::size_t end = j - cfg.horizon;
        if (cfg.strategy == Strategy::joint) {
            double z = predict(model.models.front().params, window_at(scaled, end, cfg.lookback))(0);
            if (delta) z += scaled_sum[end];
            out.predictions[k] = model.target_scaler.unscale(z);
        } else {
            double sum = 0.0;
            for (std::size_t c = 0; c < channels.size(); ++c) {
                const Channels single{scaled[c]};
                double z = predict(model.models[c].params, window_at(single, end, cfg.lookback))(0);
                if (delta) z += scaled[c][end];
                const double v = model.channel_scalers[c].unscale(z);
                out.channel_predictions[c][k] = v;
                sum += v;
            }
            out.predictions[k] = sum;
        }
    }
    return out;
}

ForecastReport make_report(std::string split_name, const ForecastModel& model, const Forecast& fc,
                           std::span<const double> prices) {
    ForecastReport r;
    r.split_name = std::move(split_name);
    r.index_map = fc.index_map;
    r.predictions = fc.predictions;
    r.actuals.reserve(fc.index_map.size());
    r.baseline.reserve(fc.index_map.size());
    const std::size_t h = model.config.horizon;
    for (const std::size_t j : fc.index_map) {
        if (j >= prices.size() || j < h) throw DataError("report index " + std::to_string(j) + " has no actual value");
        r.actuals.push_back(prices[j]);
        r.baseline.push_back(prices[j - h]);
    }
    if (r.index_map.empty()) return r;
    r.metrics = evaluate(r.predictions, r.actuals);
    r.baseline_metrics = evaluate(r.baseline, r.actuals);
    r.scaled_metrics = evaluate(scale(model.target_scaler, r.predictions), scale(model.target_scaler, r.actuals));
    return r;
}

// ---------------------------------------------------------------------------

PipelineResult run_pipeline(const TimeSeries& prices, const PipelineConfig& config, std::size_t threads) {
    in_stage("config", [&] { config.validate(); });
    auto decomposition = in_stage("decompose", [&] { return eemd(prices.values, config.eemd, threads); });
    return run_pipeline(prices, std::move(decomposition), config, threads);
}

PipelineResult run_pipeline(const TimeSeries& prices, EemdResult decomposition, const PipelineConfig& config,
                            std::size_t threads) {
    in_stage("config", [&] { config.validate(); });
    PipelineResult result;
    result.decomposition = std::move(decomposition);
    const std::size_t n = prices.size();

    in_stage("decompose", [&] {
        if (result.decomposition.imf_set.residue.size() != n) {
            throw DimensionError("decomposition length differs from the price series");
        }
        result.channels = decomposition_channels(result.decomposition.imf_set, config.max_channels);
    });
    result.ranges = in_stage("split", [&] { return split(n, config.split); });
    const IndexRange fit_range{0, result.ranges.train.end};

    ForecastModel& model = result.model;
    model.config = config;
    model.channel_count = result.channels.size();

    Channels scaled(result.channels.size());
    std::vector<double> scaled_prices;
    in_stage("scale", [&] {
        for (std::size_t c = 0; c < result.channels.size(); ++c) {
            const auto& ch = result.channels[c];
            model.channel_scalers.push_back(
                fit_scaler(std::span(ch).subspan(fit_range.begin, fit_range.size()), config.scaler_mode));
            scaled[c] = scale(model.channel_scalers.back(), ch);
        }
        model.target_scaler =
            fit_scaler(std::span(prices.values).subspan(fit_range.begin, fit_range.size()), config.scaler_mode);
        scaled_prices = scale(model.target_scaler, prices.values);
    });

    struct Split {
        WindowedDataset train, validation;
    };
    std::vector<Split> datasets;
    in_stage("window", [&] {
        const auto frame = [&](const WindowedDataset& all) {
            Split s{select_targets(all, result.ranges.train), select_targets(all, result.ranges.validation)};
            if (!is_leakage_free(s.train) || !is_leakage_free(s.validation)) {
                throw DataError("window leaks future samples into its inputs");
            }
            if (s.train.empty() || s.validation.empty()) {
                throw DataError("training or validation split has no complete windows");
            }
            return s;
        };
        if (config.strategy == Strategy::joint) {
            datasets.push_back(
                frame(make_windows(scaled, config.lookback, target_series(scaled_prices, config), config.horizon)));
        } else {
            for (const auto& ch : scaled) {
                datasets.push_back(
                    frame(make_windows(Channels{ch}, config.lookback, target_series(ch, config), config.horizon)));
            }
        }
    });

    in_stage("train", [&] {
        model.models.resize(datasets.size());
        const std::size_t inputs = config.strategy == Strategy::joint ? scaled.size() : 1;
        parallel_for(datasets.size(), threads, [&](std::size_t m) {
            const bool single = datasets.size() == 1;
            TrainConfig tc = config.train;
            if (!single) tc.shuffle_seed = trial_seed(config.train.shuffle_seed, m);
            const auto initial = init_params({inputs, config.hidden_size, 1},
                                             single ? config.init_seed : trial_seed(config.init_seed, m));
            auto trained = train(initial, datasets[m].train, datasets[m].validation, tc);
            model.models[m] = {std::move(trained.params), std::move(trained.optimizer), std::move(trained.history),
                               trained.best_epoch};
        });
    });

    in_stage("forecast", [&] {
        const auto indices_in = [&](const IndexRange& range) {
            std::vector<std::size_t> idx;
            for (std::size_t j = std::max(range.begin, config.lookback + config.horizon - 1); j < range.end; ++j) {
                idx.push_back(j);
            }
            return idx;
        };
        const auto report = [&](const char* name, const IndexRange& range) {
            const auto idx = indices_in(range);
            return make_report(name, model, forecast(model, result.channels, idx), prices.values);
        };
        result.train = report("train", result.ranges.train);
        result.validation = report("validation", result.ranges.validation);
        result.test = report("test", result.ranges.test);
        if (result.test.index_map.empty()) throw DataError("test split has no complete windows");
    });
    return result;
}

// ---------------------------------------------------------------------------

void save_forecast_model(const std::filesystem::path& path, const ForecastModel& model) {
    json scalers = json::array();
    for (const auto& s : model.channel_scalers) scalers.push_back(detail::to_json(s));
    json models = json::array();
    for (const auto& m : model.models) {
        json entry = detail::to_json(ModelCheckpoint{m.params, m.optimizer, model.config.train});
        json history = json::array();
        for (const auto& h : m.history) history.push_back({h.epoch, h.train_loss, h.validation_loss});
        entry["history"] = std::move(history);
        entry["best_epoch"] = m.best_epoch;
        models.push_back(std::move(entry));
    }
    detail::write_json(path, {{"format", "hht-forecast-checkpoint"},
                              {"version", 1},
                              {"config", config_to_json(model.config)},
                              {"channel_count", model.channel_count},
                              {"channel_scalers", std::move(scalers)},
                              {"target_scaler", detail::to_json(model.target_scaler)},
                              {"models", std::move(models)}});
}

ForecastModel load_forecast_model(const std::filesystem::path& path, const ExpectedShape& expected) {
    const json j = detail::read_json(path);
    if (j.value("format", std::string{}) != "hht-forecast-checkpoint") {
        throw DataError(path.string() + " is not a forecast checkpoint");
    }
    ForecastModel model;
    try {
        model.config = config_from_json(j.at("config"));
        model.channel_count = j.at("channel_count").get<std::size_t>();
        for (const auto& s : j.at("channel_scalers")) model.channel_scalers.push_back(detail::scaler_from_json(s));
        model.target_scaler = detail::scaler_from_json(j.at("target_scaler"));
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }

    if (expected.hidden_size && *expected.hidden_size != model.config.hidden_size) {
        throw DimensionError("checkpoint hidden size " + std::to_string(model.config.hidden_size) +
                             " does not match requested " + std::to_string(*expected.hidden_size));
    }
    if (expected.lookback && *expected.lookback != model.config.lookback) {
        throw DimensionError("checkpoint lookback " + std::to_string(model.config.lookback) +
                             " does not match requested " + std::to_string(*expected.lookback));
    }
    if (expected.channel_count && *expected.channel_count != model.channel_count) {
        throw DimensionError("checkpoint has " + std::to_string(model.channel_count) + " channels, expected " +
                             std::to_string(*expected.channel_count));
    }
    if (model.channel_scalers.size() != model.channel_count) throw DimensionError("scaler count differs from channels");

    const std::size_t inputs = model.config.strategy == Strategy::joint ? model.channel_count : 1;
    const LstmDims dims{inputs, model.config.hidden_size, 1};
    for (const auto& entry : j.at("models")) {
        auto ckpt = detail::model_from_json(entry, dims);
        TrainedModel m{std::move(ckpt.params), std::move(ckpt.optimizer), {}, entry.value("best_epoch", std::size_t{0})};
        if (entry.contains("history")) {
            for (const auto& row : entry.at("history")) {
                m.history.push_back({row.at(0).get<std::size_t>(), row.at(1).get<double>(), row.at(2).get<double>()});
            }
        }
        model.models.push_back(std::move(m));
    }
    const std::size_t want = model.config.strategy == Strategy::joint ? 1 : model.channel_count;
    if (model.models.size() != want) throw DimensionError("checkpoint model count does not match its strategy");
    return model;
}

}  // namespace hht
