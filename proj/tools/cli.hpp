#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "hht/data.hpp"
#include "hht/eemd.hpp"
#include "hht/pipeline.hpp"

namespace hht::cli {

inline constexpr const char* kThreadsEnv = "HHT_FORECAST_THREADS";

/// Options shared by every command that reads a price CSV.
struct InputOptions {
    std::filesystem::path input;
    CsvSchema schema{};
    PriceField field = PriceField::close;
    std::int64_t interval = 14400;
    GapPolicy gap_policy = GapPolicy::error;
};

struct DecomposeOptions {
    InputOptions data;
    EemdConfig eemd{};
    std::filesystem::path out_dir;
    std::size_t threads = 1;
};

struct TrainOptions {
    InputOptions data;
    PipelineConfig pipeline{};
    std::filesystem::path out_dir;
    std::size_t threads = 1;
};

struct EvaluateOptions {
    InputOptions data;
    std::filesystem::path checkpoint;
    ExpectedShape expected{};
    std::filesystem::path out_dir;
    std::size_t threads = 1;
};

/// Each command writes its artifacts plus manifest.json into out_dir and
/// throws hht::Error (usually StageError) on failure.
void cmd_decompose(const DecomposeOptions& options);
void cmd_train(const TrainOptions& options);
void cmd_evaluate(const EvaluateOptions& options);
void cmd_predict(const EvaluateOptions& options);

/// Re-runs the command recorded in a manifest, writing into out_dir.
void cmd_replay(const std::filesystem::path& manifest, const std::filesystem::path& out_dir,
                std::optional<std::size_t> threads);

/// Hex SHA-256 of a file's bytes.
std::string file_digest(const std::filesystem::path& path);

/// Worker count: the environment override if set, else `requested`.
std::size_t resolve_threads(std::size_t requested);

/// Parses argv and dispatches. Returns the process exit code:
/// 0 success, 1 runtime or numeric failure, 2 usage error.
int run(int argc, const char* const* argv);

}  // namespace hht::cli
