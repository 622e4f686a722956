#include "cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "hht/error.hpp"
#include "hht/io.hpp"
#include "hht/plot.hpp"

#ifndef HHT_VERSION
#define HHT_VERSION "0.0.0"
#endif

namespace hht::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename F>
auto in_stage(const char* stage, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError(stage, e.what());
    } catch (const fs::filesystem_error& e) {
        throw StageError(stage, e.what());
    }
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json input_to_json(const InputOptions& in) {
    return {{"path", fs::absolute(in.input).string()},
            {"field", std::string(to_string(in.field))},
            {"interval", in.interval},
            {"gap_policy", std::string(to_string(in.gap_policy))},
            {"columns",
             {{"timestamp", in.schema.timestamp},
              {"open", in.schema.open},
              {"high", in.schema.high},
              {"low", in.schema.low},
              {"close", in.schema.close},
              {"volume", in.schema.volume}}}};
}

InputOptions input_from_json(const json& j) {
    InputOptions in;
    in.input = j.at("path").get<std::string>();
    in.field = parse_price_field(j.at("field").get<std::string>());
    in.interval = j.at("interval").get<std::int64_t>();
    in.gap_policy = parse_gap_policy(j.at("gap_policy").get<std::string>());
    const auto& c = j.at("columns");
    in.schema = {c.at("timestamp"), c.at("open"), c.at("high"), c.at("low"), c.at("close"), c.at("volume")};
    return in;
}

/// Guards against an output path resolving to one of the inputs.
void check_not_input(const fs::path& out, std::initializer_list<fs::path> inputs) {
    for (const auto& in : inputs) {
        std::error_code ec;
        if (!in.empty() && fs::exists(out) && fs::equivalent(out, in, ec)) {
            throw DataError("refusing to overwrite input file '" + in.string() + "'");
        }
    }
}

void prepare_out_dir(const fs::path& dir) {
    if (dir.empty()) throw ConfigError("no output directory given");
    fs::create_directories(dir);
}

void write_manifest(const fs::path& dir, const std::string& command, json config, const InputOptions& data,
                    std::vector<std::pair<std::string, fs::path>> digests, json extra = json::object()) {
    json d = json::object();
    for (const auto& [role, path] : digests) d[role] = "sha256:" + file_digest(path);
    json m = {{"command", command},
              {"config_snapshot", std::move(config)},
              {"input", input_to_json(data)},
              {"input_digest", std::move(d)},
              {"tool_version", HHT_VERSION},
              {"timestamp", utc_now()}};
    for (auto& [k, v] : extra.items()) m[k] = v;
    std::ofstream out(dir / "manifest.json");
    if (!out) throw DataError("cannot write manifest in '" + dir.string() + "'");
    out << m.dump(2) << '\n';
}

TimeSeries load_series(const InputOptions& in) {
    return in_stage("load", [&] {
        const auto records = load_csv(in.input, in.schema);
        if (records.empty()) throw DataError("'" + in.input.string() + "' has no data rows");
        auto series = to_series(records, in.field, in.interval, in.gap_policy);
        series.name = std::string(to_string(in.field));
        return series;
    });
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << text;
}

std::string imf_svg(const TimeSeries& series, const ImfSet& set) {
    std::vector<plot::Line> panels;
    panels.push_back({series.name.empty() ? "signal" : series.name, series.values, "#222222"});
    for (const auto& imf : set.imfs) panels.push_back({"IMF" + std::to_string(imf.index), imf.values, "#1f77b4"});
    panels.push_back({"residue", set.residue, "#d62728"});
    return plot::stacked_chart("EEMD decomposition", panels);
}

std::string history_csv(const std::vector<EpochLoss>& history) {
    std::string out = "epoch,train_loss,val_loss\n";
    for (const auto& h : history) {
        out += std::to_string(h.epoch) + ',' + format_double(h.train_loss) + ',' + format_double(h.validation_loss) +
               '\n';
    }
    return out;
}

/// Mean loss per epoch across models; epochs a model never reached (early
/// stop) are averaged over the models that did.
std::vector<EpochLoss> aggregate_history(const std::vector<TrainedModel>& models) {
    std::size_t epochs = 0;
    for (const auto& m : models) epochs = std::max(epochs, m.history.size());
    std::vector<EpochLoss> out;
    for (std::size_t e = 0; e < epochs; ++e) {
        EpochLoss row{};
        std::size_t count = 0;
        for (const auto& m : models) {
            if (e >= m.history.size()) continue;
            row.epoch = m.history[e].epoch;
            row.train_loss += m.history[e].train_loss;
            row.validation_loss += m.history[e].validation_loss;
            ++count;
        }
        row.train_loss /= static_cast<double>(count);
        row.validation_loss /= static_cast<double>(count);
        out.push_back(row);
    }
    return out;
}

json metrics_json(const Metrics& m) { return json::parse(metrics_to_json(m)); }

struct LoadedModel {
    ForecastModel model;
    TimeSeries series;
    Channels channels;
};

LoadedModel load_for_forecast(const EvaluateOptions& options) {
    LoadedModel out;
    out.model = in_stage("checkpoint", [&] { return load_forecast_model(options.checkpoint, options.expected); });
    out.series = load_series(options.data);
    out.channels = in_stage("decompose", [&] {
        const auto result = eemd(out.series.values, out.model.config.eemd, options.threads);
        auto channels = decomposition_channels(result.imf_set, out.model.config.max_channels);
        if (channels.size() != out.model.channel_count) {
            throw DimensionError("input decomposes into " + std::to_string(channels.size()) +
                                 " channels but the checkpoint expects " + std::to_string(out.model.channel_count));
        }
        return channels;
    });
    return out;
}

json expected_to_json(const ExpectedShape& e) {
    json j = json::object();
    if (e.hidden_size) j["hidden_size"] = *e.hidden_size;
    if (e.lookback) j["lookback"] = *e.lookback;
    if (e.channel_count) j["channel_count"] = *e.channel_count;
    return j;
}

ExpectedShape expected_from_json(const json& j) {
    ExpectedShape e;
    if (j.contains("hidden_size")) e.hidden_size = j.at("hidden_size").get<std::size_t>();
    if (j.contains("lookback")) e.lookback = j.at("lookback").get<std::size_t>();
    if (j.contains("channel_count")) e.channel_count = j.at("channel_count").get<std::size_t>();
    return e;
}

std::vector<std::size_t> targets_in(const IndexRange& range, const PipelineConfig& config) {
    std::vector<std::size_t> idx;
    for (std::size_t j = std::max(range.begin, config.lookback + config.horizon - 1); j < range.end; ++j) {
        idx.push_back(j);
    }
    return idx;
}

}  // namespace

std::string file_digest(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("sha256 unavailable");
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xf];
    }
    return out;
}

std::size_t resolve_threads(std::size_t requested) {
    if (const char* env = std::getenv(kThreadsEnv); env && *env) {
        std::size_t value = 0;
        std::istringstream in(env);
        if (!(in >> value) || !in.eof() || value == 0) {
            throw ConfigError(std::string(kThreadsEnv) + " must be a positive integer, got '" + env + "'");
        }
        return value;
    }
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

void cmd_decompose(const DecomposeOptions& options) {
    in_stage("config", [&] { options.eemd.validate(); });
    const auto series = load_series(options.data);
    const auto result = in_stage("decompose", [&] { return eemd(series.values, options.eemd, options.threads); });
    in_stage("write", [&] {
        prepare_out_dir(options.out_dir);
        for (const char* name : {"imfs.csv", "imfs.svg", "eemd.json", "manifest.json"}) {
            check_not_input(options.out_dir / name, {options.data.input});
        }
        write_imf_csv(options.out_dir / "imfs.csv", result.imf_set, series.start_timestamp, series.interval);
        write_eemd_sidecar(options.out_dir / "eemd.json", result);
        plot::write_svg(options.out_dir / "imfs.svg", imf_svg(series, result.imf_set));
        write_manifest(options.out_dir, "decompose", json::parse(eemd_config_to_json(options.eemd)), options.data,
                       {{"input", options.data.input}});
    });
}

void cmd_train(const TrainOptions& options) {
    const auto series = load_series(options.data);
    const auto result = run_pipeline(series, options.pipeline, options.threads);
    in_stage("write", [&] {
        prepare_out_dir(options.out_dir);
        for (const char* name : {"checkpoint.json", "history.csv", "manifest.json"}) {
            check_not_input(options.out_dir / name, {options.data.input});
        }
        save_forecast_model(options.out_dir / "checkpoint.json", result.model);
        const auto& models = result.model.models;
        if (models.size() == 1) {
            write_text(options.out_dir / "history.csv", history_csv(models.front().history));
        } else {
            write_text(options.out_dir / "history.csv", history_csv(aggregate_history(models)));
            for (std::size_t c = 0; c < models.size(); ++c) {
                write_text(options.out_dir / ("history_channel" + std::to_string(c + 1) + ".csv"),
                           history_csv(models[c].history));
            }
        }
        json best = json::array();
        for (const auto& m : models) best.push_back(m.best_epoch);
        write_manifest(options.out_dir, "train", json::parse(pipeline_config_to_json(options.pipeline)),
                       options.data, {{"input", options.data.input}}, {{"best_epoch", best}});
    });
}

void cmd_evaluate(const EvaluateOptions& options) {
    const auto loaded = load_for_forecast(options);
    const auto& model = loaded.model;
    const auto& prices = loaded.series.values;
    const auto [test, validation] = in_stage("forecast", [&] {
        const auto ranges = split(prices.size(), model.config.split);
        const auto report = [&](const char* name, const IndexRange& range) {
            const auto idx = targets_in(range, model.config);
            if (idx.empty()) throw DataError(std::string(name) + " split has no complete windows");
            return make_report(name, model, forecast(model, loaded.channels, idx), prices);
        };
        return std::pair{report("test", ranges.test), report("validation", ranges.validation)};
    });

    in_stage("write", [&] {
        prepare_out_dir(options.out_dir);
        for (const char* name : {"forecast.csv", "metrics.json", "forecast.svg", "manifest.json"}) {
            check_not_input(options.out_dir / name, {options.data.input, options.checkpoint});
        }
        write_forecast_csv(options.out_dir / "forecast.csv", test);
        json metrics = json::object();
        for (const auto* r : {&validation, &test}) {
            metrics[r->split_name] = {{"model", metrics_json(r->metrics)},
                                      {"persistence", metrics_json(r->baseline_metrics)},
                                      {"model_scaled", metrics_json(r->scaled_metrics)},
                                      {"first_index", r->index_map.front()},
                                      {"last_index", r->index_map.back()}};
        }
        write_text(options.out_dir / "metrics.json", metrics.dump(2) + '\n');
        plot::write_svg(options.out_dir / "forecast.svg",
                        plot::line_chart("Test split forecast",
                                         {{"actual", test.actuals, "#222222"},
                                          {"EEMD-LSTM", test.predictions, "#d62728"},
                                          {"persistence", test.baseline, "#7f7f7f"}}));
        write_manifest(options.out_dir, "evaluate", json::parse(pipeline_config_to_json(model.config)), options.data,
                       {{"input", options.data.input}, {"checkpoint", options.checkpoint}},
                       {{"checkpoint", fs::absolute(options.checkpoint).string()}, {"expected", expected_to_json(options.expected)}});
    });
}

void cmd_predict(const EvaluateOptions& options) {
    const auto loaded = load_for_forecast(options);
    const auto& model = loaded.model;
    const std::size_t n = loaded.series.size();
    const auto fc = in_stage("forecast", [&] {
        std::vector<std::size_t> idx;
        for (std::size_t j = n; j < n + model.config.horizon; ++j) idx.push_back(j);
        return forecast(model, loaded.channels, idx);
    });
    in_stage("write", [&] {
        prepare_out_dir(options.out_dir);
        for (const char* name : {"prediction.csv", "manifest.json"}) {
            check_not_input(options.out_dir / name, {options.data.input, options.checkpoint});
        }
        std::string csv = "index,timestamp,predicted\n";
        for (std::size_t k = 0; k < fc.index_map.size(); ++k) {
            csv += std::to_string(fc.index_map[k]) + ',' + std::to_string(loaded.series.timestamp_at(fc.index_map[k])) +
                   ',' + format_double(fc.predictions[k]) + '\n';
        }
        write_text(options.out_dir / "prediction.csv", csv);
        write_manifest(options.out_dir, "predict", json::parse(pipeline_config_to_json(model.config)), options.data,
                       {{"input", options.data.input}, {"checkpoint", options.checkpoint}},
                       {{"checkpoint", fs::absolute(options.checkpoint).string()}, {"expected", expected_to_json(options.expected)}});
    });
}

void cmd_replay(const fs::path& manifest_path, const fs::path& out_dir, std::optional<std::size_t> threads) {
    json m;
    InputOptions data;
    std::string command;
    in_stage("manifest", [&] {
        std::ifstream in(manifest_path);
        if (!in) throw DataError("cannot open '" + manifest_path.string() + "'");
        try {
            m = json::parse(in);
            command = m.at("command").get<std::string>();
            data = input_from_json(m.at("input"));
            for (const auto& [role, digest] : m.at("input_digest").items()) {
                const fs::path path = role == "input" ? data.input : fs::path(m.at(role).get<std::string>());
                if (digest.get<std::string>() != "sha256:" + file_digest(path)) {
                    throw DataError(role + " '" + path.string() + "' no longer matches the recorded digest");
                }
            }
        } catch (const json::exception& e) {
            throw DataError("malformed manifest: " + std::string(e.what()));
        }
    });
    const std::size_t workers = resolve_threads(threads.value_or(0));
    const std::string config = m.at("config_snapshot").dump();

    if (command == "decompose") {
        cmd_decompose({data, in_stage("manifest", [&] { return eemd_config_from_json(config); }), out_dir, workers});
    } else if (command == "train") {
        cmd_train({data, in_stage("manifest", [&] { return pipeline_config_from_json(config); }), out_dir, workers});
    } else if (command == "evaluate" || command == "predict") {
        EvaluateOptions e{data, m.at("checkpoint").get<std::string>(), expected_from_json(m.value("expected", json::object())),
                          out_dir, workers};
        command == "evaluate" ? cmd_evaluate(e) : cmd_predict(e);
    } else {
        throw StageError("manifest", "unknown command '" + command + "'");
    }
}

// ---------------------------------------------------------------------------

namespace {

void add_input_flags(CLI::App& cmd, InputOptions& in) {
    cmd.add_option("input", in.input, "OHLCV CSV file")->required()->check(CLI::ExistingFile);
    cmd.add_option_function<std::string>(
           "--field", [&in](const std::string& v) { in.field = parse_price_field(v); }, "price column to model")
        ->check(CLI::IsMember({"open", "high", "low", "close", "volume"}))
        ->default_str("close");
    cmd.add_option("--interval", in.interval, "bar interval in seconds")->capture_default_str()->check(CLI::PositiveNumber);
    cmd.add_option_function<std::string>(
           "--gap-policy", [&in](const std::string& v) { in.gap_policy = parse_gap_policy(v); },
           "missing bars: error or forward-fill")
        ->check(CLI::IsMember({"error", "forward-fill"}))
        ->default_str("error");
    cmd.add_option("--col-timestamp", in.schema.timestamp, "timestamp column name")->capture_default_str();
    cmd.add_option("--col-open", in.schema.open, "open column name")->capture_default_str();
    cmd.add_option("--col-high", in.schema.high, "high column name")->capture_default_str();
    cmd.add_option("--col-low", in.schema.low, "low column name")->capture_default_str();
    cmd.add_option("--col-close", in.schema.close, "close column name")->capture_default_str();
    cmd.add_option("--col-volume", in.schema.volume, "volume column name")->capture_default_str();
}

void add_eemd_flags(CLI::App& cmd, EemdConfig& e) {
    cmd.add_option("--noise", e.noise_amplitude, "noise std as a fraction of the signal std")->capture_default_str();
    cmd.add_option("--ensemble", e.ensemble_size, "EEMD trials")->capture_default_str();
    cmd.add_option("--max-imfs", e.sift.max_imfs, "maximum IMFs per trial")->capture_default_str();
    cmd.add_option("--max-sift", e.sift.max_sift_iterations, "sifting iterations per IMF")->capture_default_str();
    cmd.add_option("--sd-threshold", e.sift.sd_threshold, "sifting stop threshold")->capture_default_str();
    cmd.add_option_function<std::string>(
           "--boundary", [&e](const std::string& v) { e.sift.boundary_policy = parse_boundary_policy(v); },
           "envelope end condition")
        ->check(CLI::IsMember({"mirror", "clamp"}))
        ->default_str("mirror");
    cmd.add_option_function<std::string>(
           "--alignment", [&e](const std::string& v) { e.alignment_policy = parse_alignment_policy(v); },
           "combining trials with different IMF counts")
        ->check(CLI::IsMember({"pad_with_zeros", "truncate_to_min"}))
        ->default_str("pad_with_zeros");
}

void add_output_flags(CLI::App& cmd, fs::path& out, std::size_t& threads) {
    cmd.add_option("-o,--out", out, "output directory")->required();
    cmd.add_option("--threads", threads, "worker threads (0: all cores)")->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"EEMD-LSTM price decomposition and forecasting", "hht-forecast"};
    app.set_version_flag("--version", HHT_VERSION);
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    std::uint64_t seed = 0;

    DecomposeOptions dec;
    dec.threads = 0;
    auto* decompose = app.add_subcommand("decompose", "Run EEMD and write the IMFs");
    add_input_flags(*decompose, dec.data);
    add_eemd_flags(*decompose, dec.eemd);
    decompose->add_option("--seed", dec.eemd.seed, "noise seed")->capture_default_str();
    add_output_flags(*decompose, dec.out_dir, dec.threads);

    TrainOptions tr;
    tr.threads = 0;
    auto& pc = tr.pipeline;
    auto* train_cmd = app.add_subcommand("train", "Decompose, train the LSTM and save a checkpoint");
    add_input_flags(*train_cmd, tr.data);
    add_eemd_flags(*train_cmd, pc.eemd);
    train_cmd->add_option("--seed", seed, "seed for noise, initialisation and shuffling")->capture_default_str();
    train_cmd->add_option("--lookback", pc.lookback, "window length")->capture_default_str();
    train_cmd->add_option("--horizon", pc.horizon, "steps ahead to forecast")->capture_default_str();
    train_cmd->add_option("--hidden", pc.hidden_size, "LSTM hidden units")->capture_default_str();
    train_cmd->add_option("--channels", pc.max_channels, "decomposition channels fed to the model")
        ->capture_default_str();
    train_cmd->add_option("--epochs", pc.train.epochs, "training epochs")->capture_default_str();
    train_cmd->add_option("--lr", pc.train.learning_rate, "rmsprop learning rate")->capture_default_str();
    train_cmd->add_option("--decay", pc.train.rmsprop_decay, "rmsprop decay")->capture_default_str();
    train_cmd->add_option("--batch", pc.train.batch_size, "minibatch size")->capture_default_str();
    train_cmd->add_option("--patience", pc.train.early_stop_patience, "early-stopping patience in epochs (0: off)")
        ->capture_default_str();
    train_cmd->add_option("--clip", pc.train.max_grad_norm, "global gradient norm clip (0: off)")
        ->capture_default_str();
    train_cmd->add_option("--train-frac", pc.split.train_fraction, "training fraction")->capture_default_str();
    train_cmd->add_option("--val-frac", pc.split.validation_fraction, "validation fraction")->capture_default_str();
    train_cmd->add_option("--test-frac", pc.split.test_fraction, "test fraction")->capture_default_str();
    train_cmd->add_option_function<std::string>(
                 "--strategy", [&pc](const std::string& v) { pc.strategy = parse_strategy(v); },
                 "joint model or one model per IMF")
        ->check(CLI::IsMember({"joint", "per-imf"}))
        ->default_str("joint");
    train_cmd->add_option_function<std::string>(
                 "--scaler", [&pc](const std::string& v) { pc.scaler_mode = parse_scaler_mode(v); },
                 "divide by std or by variance")
        ->check(CLI::IsMember({"std", "variance"}))
        ->default_str("std");
    train_cmd->add_option_function<std::string>(
                 "--target", [&pc](const std::string& v) { pc.target_form = parse_target_form(v); },
                 "predict the next level or the change")
        ->check(CLI::IsMember({"level", "delta"}))
        ->default_str("delta");
    add_output_flags(*train_cmd, tr.out_dir, tr.threads);

    EvaluateOptions ev;
    ev.threads = 0;
    std::size_t hidden = 0;
    std::size_t lookback = 0;
    const auto add_model_flags = [&](CLI::App& cmd) {
        add_input_flags(cmd, ev.data);
        cmd.add_option("-c,--checkpoint", ev.checkpoint, "checkpoint from train")->required()->check(CLI::ExistingFile);
        cmd.add_option("--hidden", hidden, "expected hidden size");
        cmd.add_option("--lookback", lookback, "expected window length");
        add_output_flags(cmd, ev.out_dir, ev.threads);
    };
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Forecast the test split and compare with persistence");
    add_model_flags(*evaluate_cmd);
    auto* predict_cmd = app.add_subcommand("predict", "Forecast the bars after the end of the input");
    add_model_flags(*predict_cmd);

    fs::path manifest;
    fs::path replay_out;
    std::size_t replay_threads = 0;
    auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
    replay->add_option("manifest", manifest, "manifest.json")->required()->check(CLI::ExistingFile);
    add_output_flags(*replay, replay_out, replay_threads);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << "hht-forecast: error: " << e.what() << '\n';
        return 2;
    }

    try {
        try {
            if (train_cmd->parsed()) {
                if (train_cmd->count("--seed") > 0) pc.eemd.seed = pc.init_seed = pc.train.shuffle_seed = seed;
                pc.validate();
                tr.threads = resolve_threads(tr.threads);
            } else if (decompose->parsed()) {
                dec.eemd.validate();
                dec.threads = resolve_threads(dec.threads);
            } else if (evaluate_cmd->parsed() || predict_cmd->parsed()) {
                if (hidden > 0) ev.expected.hidden_size = hidden;
                if (lookback > 0) ev.expected.lookback = lookback;
                ev.threads = resolve_threads(ev.threads);
            }
        } catch (const ConfigError& e) {
            std::cerr << "hht-forecast: error: " << e.what() << "\n" << app.help() << '\n';
            return 2;
        }

        if (decompose->parsed()) cmd_decompose(dec);
        if (train_cmd->parsed()) cmd_train(tr);
        if (evaluate_cmd->parsed()) cmd_evaluate(ev);
        if (predict_cmd->parsed()) cmd_predict(ev);
        if (replay->parsed()) cmd_replay(manifest, replay_out, replay_threads > 0 ? std::optional(replay_threads) : std::nullopt);
    } catch (const std::exception& e) {
        std::cerr << "hht-forecast: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace hht::cli
