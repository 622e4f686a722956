#include "hht/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <type_traits>

#include "hht/error.hpp"

namespace hht {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

[[noreturn]] void fail_at(std::size_t line, const std::string& what) {
    throw DataError("line " + std::to_string(line) + ": " + what);
}

template <typename T>
T parse_number(std::string_view field, std::size_t line, std::string_view column) {
    T value{};
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    if (!field.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (field.empty() || ec != std::errc{} || ptr != last) {
        fail_at(line, "cannot parse " + std::string(column) + " value '" + std::string(field) + "'");
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) fail_at(line, "non-finite " + std::string(column) + " value");
    }
    return value;
}

}  // namespace

PriceField parse_price_field(std::string_view name) {
    if (name == "open") return PriceField::open;
    if (name == "high") return PriceField::high;
    if (name == "low") return PriceField::low;
    if (name == "close") return PriceField::close;
    if (name == "volume") return PriceField::volume;
    throw ConfigError("unknown price field '" + std::string(name) + "'");
}

std::string_view to_string(PriceField field) noexcept {
    switch (field) {
        case PriceField::open: return "open";
        case PriceField::high: return "high";
        case PriceField::low: return "low";
        case PriceField::close: return "close";
        case PriceField::volume: return "volume";
    }
    return "close";
}

GapPolicy parse_gap_policy(std::string_view name) {
    if (name == "error") return GapPolicy::error;
    if (name == "forward-fill" || name == "forward_fill") return GapPolicy::forward_fill;
    throw ConfigError("unknown gap policy '" + std::string(name) + "'");
}

std::string_view to_string(GapPolicy policy) noexcept {
    return policy == GapPolicy::error ? "error" : "forward-fill";
}

std::vector<OhlcvRecord> parse_csv(std::string_view text, const CsvSchema& schema) {
    std::vector<OhlcvRecord> records;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    std::vector<std::string_view> header;
    std::array<std::size_t, 6> column{};

    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        const auto line = trim(text.substr(pos, eol - pos));
        pos = eol + 1;
        ++line_no;
        if (line.empty()) continue;

        auto fields = split_fields(line);
        if (header.empty()) {
            if (line_no == 1 && !fields.empty() && fields[0].starts_with("\xEF\xBB\xBF")) {
                fields[0].remove_prefix(3);
            }
            header = fields;
            const std::array<const std::string*, 6> names{&schema.timestamp, &schema.open, &schema.high,
                                                          &schema.low,       &schema.close, &schema.volume};
            for (std::size_t k = 0; k < names.size(); ++k) {
                const auto it = std::find(header.begin(), header.end(), std::string_view(*names[k]));
                if (it == header.end()) fail_at(line_no, "header is missing column '" + *names[k] + "'");
                column[k] = static_cast<std::size_t>(it - header.begin());
            }
            continue;
        }

        if (fields.size() != header.size()) {
            fail_at(line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                                 std::to_string(fields.size()));
        }
        OhlcvRecord r;
        r.timestamp = parse_number<std::int64_t>(fields[column[0]], line_no, schema.timestamp);
        r.open = parse_number<double>(fields[column[1]], line_no, schema.open);
        r.high = parse_number<double>(fields[column[2]], line_no, schema.high);
        r.low = parse_number<double>(fields[column[3]], line_no, schema.low);
        r.close = parse_number<double>(fields[column[4]], line_no, schema.close);
        r.volume = parse_number<double>(fields[column[5]], line_no, schema.volume);

        if (r.open <= 0 || r.high <= 0 || r.low <= 0 || r.close <= 0) fail_at(line_no, "prices must be positive");
        if (r.volume < 0) fail_at(line_no, "volume must be nonnegative");
        if (r.low > std::min(r.open, r.close) || r.high < std::max(r.open, r.close) || r.high < r.low) {
            fail_at(line_no, "OHLC invariant violated (low <= open,close <= high)");
        }
        if (!records.empty()) {
            if (r.timestamp == records.back().timestamp) fail_at(line_no, "duplicate timestamp");
            if (r.timestamp < records.back().timestamp) fail_at(line_no, "timestamps not ascending");
        }
        records.push_back(r);
    }
    if (header.empty()) throw DataError("CSV has no header row");
    return records;
}

std::vector<OhlcvRecord> load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_csv(buffer.str(), schema);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

namespace {

double field_value(const OhlcvRecord& r, PriceField field) {
    switch (field) {
        case PriceField::open: return r.open;
        case PriceField::high: return r.high;
        case PriceField::low: return r.low;
        case PriceField::close: return r.close;
        case PriceField::volume: return r.volume;
    }
    return r.close;
}

}  // namespace

TimeSeries to_series(std::span<const OhlcvRecord> records, PriceField field, std::int64_t interval,
                     GapPolicy gap_policy) {
    if (records.empty()) throw DataError("no records to convert");
    if (interval <= 0) throw ConfigError("interval must be positive");

    TimeSeries series;
    series.start_timestamp = records.front().timestamp;
    series.interval = interval;
    series.name = std::string(to_string(field));
    series.values.reserve(records.size());
    series.values.push_back(field_value(records.front(), field));

    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto delta = records[i].timestamp - records[i - 1].timestamp;
        if (delta <= 0) throw DataError("records are not strictly ascending at index " + std::to_string(i));
        if (delta % interval != 0) {
            throw DataError("timestamp " + std::to_string(records[i].timestamp) + " is off the " +
                            std::to_string(interval) + "s grid");
        }
        const auto steps = delta / interval;
        if (steps > 1) {
            if (gap_policy == GapPolicy::error) {
                throw DataError("gap in series: expected timestamp " +
                                std::to_string(records[i - 1].timestamp + interval) + ", next record at " +
                                std::to_string(records[i].timestamp));
            }
            const double fill = series.values.back();
            series.values.insert(series.values.end(), static_cast<std::size_t>(steps - 1), fill);
        }
        series.values.push_back(field_value(records[i], field));
    }
    return series;
}

// ---------------------------------------------------------------------------

ScalerMode parse_scaler_mode(std::string_view name) {
    if (name == "std") return ScalerMode::standard;
    if (name == "variance") return ScalerMode::variance;
    throw ConfigError("unknown scaler mode '" + std::string(name) + "' (expected std or variance)");
}

std::string_view to_string(ScalerMode mode) noexcept {
    return mode == ScalerMode::standard ? "std" : "variance";
}

double ScalerState::divisor() const {
    if (!(variance > 0.0)) throw NumericError("scaler variance is zero");
    return mode == ScalerMode::standard ? std::sqrt(variance) : variance;
}

double mean(std::span<const double> values) {
    if (values.empty()) return 0.0;
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double population_variance(std::span<const double> values) {
    if (values.empty()) return 0.0;
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return ss / static_cast<double>(values.size());
}

ScalerState fit_scaler(std::span<const double> values, ScalerMode mode) {
    if (values.size() < 2) throw DataError("fit_scaler needs at least 2 values");
    ScalerState state;
    state.mean = mean(values);
    state.variance = population_variance(values);
    state.mode = mode;
    if (!(state.variance > 0.0)) throw NumericError("cannot fit scaler: zero variance");
    return state;
}

std::vector<double> scale(const ScalerState& state, std::span<const double> values) {
    const double d = state.divisor();
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(), [&](double x) { return (x - state.mean) / d; });
    return out;
}

std::vector<double> unscale(const ScalerState& state, std::span<const double> scaled) {
    const double d = state.divisor();
    std::vector<double> out(scaled.size());
    std::transform(scaled.begin(), scaled.end(), out.begin(), [&](double z) { return z * d + state.mean; });
    return out;
}

// ---------------------------------------------------------------------------

void SplitSpec::validate() const {
    for (double f : {train_fraction, validation_fraction, test_fraction}) {
        if (!(f > 0.0 && f < 1.0)) throw ConfigError("split fractions must lie in (0, 1)");
    }
    if (std::abs(train_fraction + validation_fraction + test_fraction - 1.0) > 1e-9) {
        throw ConfigError("split fractions must sum to 1");
    }
}

SplitRanges split(std::size_t length, const SplitSpec& spec) {
    spec.validate();
    if (length < 10) throw DataError("split needs at least 10 samples");
    // The slack absorbs representation error in products like 100 * 0.85.
    const auto boundary = [&](double cumulative) {
        const auto b = static_cast<std::size_t>(std::floor(static_cast<double>(length) * cumulative + 1e-9));
        return std::min(b, length);
    };
    const std::size_t b1 = boundary(spec.train_fraction);
    const std::size_t b2 = std::max(b1, boundary(spec.train_fraction + spec.validation_fraction));
    return {{0, b1}, {b1, b2}, {b2, length}};
}

}  // namespace hht
