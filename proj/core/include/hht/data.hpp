#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hht {

/// One OHLCV bar. Timestamps are integer seconds since the Unix epoch.
struct OhlcvRecord {
    std::int64_t timestamp = 0;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    double volume = 0.0;
};

/// Uniformly sampled scalar series.
struct TimeSeries {
    std::int64_t start_timestamp = 0;
    std::int64_t interval = 1;
    std::vector<double> values;
    std::string name;

    std::size_t size() const noexcept { return values.size(); }
    std::int64_t timestamp_at(std::size_t i) const noexcept {
        return start_timestamp + static_cast<std::int64_t>(i) * interval;
    }
};

/// Column names used to locate each OHLCV field in a CSV header.
struct CsvSchema {
    std::string timestamp = "timestamp";
    std::string open = "open";
    std::string high = "high";
    std::string low = "low";
    std::string close = "close";
    std::string volume = "volume";
};

enum class PriceField { open, high, low, close, volume };
enum class GapPolicy { error, forward_fill };

PriceField parse_price_field(std::string_view name);
std::string_view to_string(PriceField field) noexcept;
GapPolicy parse_gap_policy(std::string_view name);
std::string_view to_string(GapPolicy policy) noexcept;

/// Reads and validates an OHLCV CSV file. Rows must be in strictly ascending
/// timestamp order. Errors carry the 1-based file line number.
std::vector<OhlcvRecord> load_csv(const std::filesystem::path& path, const CsvSchema& schema = {});

/// Same as load_csv, reading from an in-memory document.
std::vector<OhlcvRecord> parse_csv(std::string_view text, const CsvSchema& schema = {});

/// Resamples one field of the records onto a uniform grid of `interval`
/// seconds starting at the first record.
TimeSeries to_series(std::span<const OhlcvRecord> records, PriceField field, std::int64_t interval,
                     GapPolicy gap_policy = GapPolicy::error);

// ---------------------------------------------------------------------------
// Scaling

/// `standard` divides by the standard deviation; `variance` divides by the
/// variance itself, the literal form of the published scale formula.
enum class ScalerMode { standard, variance };

ScalerMode parse_scaler_mode(std::string_view name);
std::string_view to_string(ScalerMode mode) noexcept;

struct ScalerState {
    double mean = 0.0;
    double variance = 1.0;  // population variance
    ScalerMode mode = ScalerMode::standard;

    double divisor() const;
    double scale(double x) const { return (x - mean) / divisor(); }
    double unscale(double z) const { return z * divisor() + mean; }
};

/// Fits mean and population variance. Requires at least two values and a
/// non-constant series.
ScalerState fit_scaler(std::span<const double> values, ScalerMode mode = ScalerMode::standard);

std::vector<double> scale(const ScalerState& state, std::span<const double> values);
std::vector<double> unscale(const ScalerState& state, std::span<const double> scaled);

// ---------------------------------------------------------------------------
// Chronological splitting

struct SplitSpec {
    double train_fraction = 0.70;
    double validation_fraction = 0.15;
    double test_fraction = 0.15;

    void validate() const;
};

/// Half-open index range [begin, end).
struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end - begin; }
    bool contains(std::size_t i) const noexcept { return i >= begin && i < end; }
    friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

struct SplitRanges {
    IndexRange train;
    IndexRange validation;
    IndexRange test;
};

/// Partitions [0, length) into train, validation and test ranges in that
/// order. Boundaries are floor(length * cumulative_fraction).
SplitRanges split(std::size_t length, const SplitSpec& spec = {});

// ---------------------------------------------------------------------------
// Small statistics helpers shared across modules.

double mean(std::span<const double> values);
double population_variance(std::span<const double> values);

}  // namespace hht
