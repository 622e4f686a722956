#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "hht/data.hpp"
#include "hht/error.hpp"
#include "support.hpp"

using namespace hht;

namespace {

const char* kThreeRows =
    "timestamp,open,high,low,close,volume\n"
    "1514764800,100,110,95,105,12.5\n"
    "1514779200,105,108,101,102,3\n"
    "1514793600,102,104,99,103.25,0\n";

std::string error_of(auto&& f) {
    try {
        f();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

// Two-pass mean and population variance written independently of the library.
std::pair<double, double> two_pass(const std::vector<double>& v) {
    long double sum = 0.0L;
    for (double x : v) sum += x;
    const long double m = sum / static_cast<long double>(v.size());
    long double ss = 0.0L;
    for (double x : v) ss += (x - m) * (x - m);
    return {static_cast<double>(m), static_cast<double>(ss / static_cast<long double>(v.size()))};
}

}  // namespace

TEST_SUITE("data") {

TEST_CASE("three well-formed rows parse field by field") {
    const auto records = parse_csv(kThreeRows);
    REQUIRE(records.size() == 3);
    CHECK(records[0].timestamp == 1514764800);
    CHECK(records[0].open == 100.0);
    CHECK(records[0].high == 110.0);
    CHECK(records[0].low == 95.0);
    CHECK(records[0].close == 105.0);
    CHECK(records[0].volume == 12.5);
    CHECK(records[2].close == 103.25);
    CHECK(records[2].volume == 0.0);
}

TEST_CASE("high below low is rejected with the offending row") {
    const std::string text =
        "timestamp,open,high,low,close,volume\n"
        "1514764800,100,110,95,105,1\n"
        "1514779200,105,100,101,102,1\n";
    const auto msg = error_of([&] { parse_csv(text); });
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK_THROWS_AS(parse_csv(text), DataError);
}

TEST_CASE("malformed rows are rejected") {
    const std::string header = "timestamp,open,high,low,close,volume\n";
    CHECK_THROWS_AS(parse_csv(header + "1514764800,100,110,95,abc,1\n"), DataError);
    CHECK_THROWS_AS(parse_csv(header + "1514764800,100,110,95,105\n"), DataError);
    CHECK_THROWS_AS(parse_csv(header + "1514764800,-1,110,95,105,1\n"), DataError);
    CHECK_THROWS_AS(parse_csv(header + "1514764800,100,110,95,105,-1\n"), DataError);
    CHECK_THROWS_AS(parse_csv(header + "1514764800,100,110,95,120,1\n"), DataError);
    CHECK_THROWS_AS(parse_csv(header + "1514779200,100,110,95,105,1\n1514764800,100,110,95,105,1\n"), DataError);
    CHECK_THROWS_AS(parse_csv(header + "1514764800,100,110,95,105,1\n1514764800,100,110,95,105,1\n"), DataError);
    CHECK_THROWS_AS(parse_csv("time,open,high,low,close,volume\n1,1,1,1,1,1\n"), DataError);
}

TEST_CASE("column mapping and byte order mark") {
    const std::string text =
        "\xEF\xBB\xBF"
        "Date,O,H,L,C,V\n"
        "1514764800,100,110,95,105,1\n";
    CsvSchema schema{"Date", "O", "H", "L", "C", "V"};
    const auto records = parse_csv(text, schema);
    REQUIRE(records.size() == 1);
    CHECK(records[0].close == 105.0);
}

TEST_CASE("load_csv reads files and reports missing ones") {
    testing::TempDir dir;
    testing::write_file(dir / "bars.csv", kThreeRows);
    CHECK(load_csv(dir / "bars.csv").size() == 3);
    CHECK_THROWS_AS(load_csv(dir / "missing.csv"), DataError);
}

TEST_CASE("six contiguous closes give a series of six") {
    std::string text = "timestamp,open,high,low,close,volume\n";
    for (int i = 0; i < 6; ++i) {
        text += std::to_string(1514764800 + 14400 * i) + ",10,12,9," + std::to_string(10 + i % 2) + ",1\n";
    }
    const auto records = parse_csv(text);
    const auto series = to_series(records, PriceField::close, 14400);
    CHECK(series.size() == 6);
    CHECK(series.start_timestamp == 1514764800);
    CHECK(series.interval == 14400);
    CHECK(series.values[1] == 11.0);
    CHECK(series.timestamp_at(5) == 1514764800 + 5 * 14400);
}

TEST_CASE("a missing bar is filled forward or reported") {
    const std::string text =
        "timestamp,open,high,low,close,volume\n"
        "1514764800,100,110,95,105,1\n"
        "1514779200,105,108,101,102,1\n"
        "1514808000,102,104,99,103,1\n";
    const auto records = parse_csv(text);
    REQUIRE(records.size() == 3);

    const auto filled = to_series(records, PriceField::close, 14400, GapPolicy::forward_fill);
    CHECK(filled.size() == (1514808000 - 1514764800) / 14400 + 1);
    CHECK(filled.values == std::vector<double>{105, 102, 102, 103});

    const auto msg = error_of([&] { to_series(records, PriceField::close, 14400, GapPolicy::error); });
    CHECK(msg.find("1514793600") != std::string::npos);
    CHECK_THROWS_AS(to_series(records, PriceField::close, 14400), DataError);
}

TEST_CASE("field selection and off-grid timestamps") {
    const auto records = parse_csv(kThreeRows);
    CHECK(to_series(records, PriceField::high, 14400).values == std::vector<double>{110, 108, 104});
    CHECK(to_series(records, PriceField::volume, 14400).values == std::vector<double>{12.5, 3, 0});
    CHECK_THROWS_AS(to_series(records, PriceField::close, 10000), DataError);
    CHECK(parse_price_field("open") == PriceField::open);
    CHECK_THROWS_AS(parse_price_field("adj_close"), ConfigError);
    CHECK(parse_gap_policy("forward-fill") == GapPolicy::forward_fill);
}

TEST_CASE("scaler arithmetic") {
    const std::vector<double> v{1, 2, 3};
    const auto s = fit_scaler(v);
    CHECK(s.mean == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(s.variance == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

    CHECK_THROWS_AS(fit_scaler(std::vector<double>{5, 5, 5}), NumericError);
    CHECK_THROWS_AS(fit_scaler(std::vector<double>{5}), DataError);

    ScalerState std_state{2.0, 4.0, ScalerMode::standard};
    CHECK(std_state.scale(4.0) == 1.0);
    ScalerState var_state{2.0, 4.0, ScalerMode::variance};
    CHECK(var_state.scale(4.0) == 0.5);
    CHECK(parse_scaler_mode("variance") == ScalerMode::variance);
    CHECK(parse_scaler_mode("std") == ScalerMode::standard);
}

TEST_CASE("scaler fit matches a two-pass oracle on a training split") {
    testing::TempDir dir;
    testing::write_file(dir / "bars.csv", testing::synthetic_ohlcv_csv(600, 5));
    const auto series = to_series(load_csv(dir / "bars.csv"), PriceField::close, 14400);
    const auto ranges = split(series.size());
    const std::vector<double> train(series.values.begin(), series.values.begin() + ranges.train.end);
    const auto [m, var] = two_pass(train);
    const auto s = fit_scaler(train);
    CHECK(std::abs(s.mean - m) <= 1e-12 * std::abs(m));
    CHECK(std::abs(s.variance - var) <= 1e-12 * var);
    CHECK(std::abs(mean(train) - m) <= 1e-12 * std::abs(m));
    CHECK(std::abs(population_variance(train) - var) <= 1e-12 * var);
}

TEST_CASE("unscale inverts scale in both modes") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (auto mode : {ScalerMode::standard, ScalerMode::variance}) {
        std::vector<double> v(500);
        for (auto& x : v) x = u(rng);
        const auto s = fit_scaler(v, mode);
        const auto back = unscale(s, scale(s, v));
        for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(back[i] - v[i]) <= 1e-12 * std::max(1.0, std::abs(v[i])));
    }
}

TEST_CASE("split boundaries") {
    const auto r100 = split(100);
    CHECK(r100.train == IndexRange{0, 70});
    CHECK(r100.validation == IndexRange{70, 85});
    CHECK(r100.test == IndexRange{85, 100});

    const auto r10 = split(10);
    CHECK(r10.train == IndexRange{0, 7});
    CHECK(r10.validation == IndexRange{7, 8});
    CHECK(r10.test == IndexRange{8, 10});

    CHECK_THROWS_AS(split(9), DataError);
    CHECK_THROWS_AS(split(100, SplitSpec{0.5, 0.2, 0.2}), ConfigError);
    CHECK_THROWS_AS(split(100, SplitSpec{1.0, 0.0, 0.0}), ConfigError);
}

TEST_CASE("split partitions every length from 10 to 1000") {
    const SplitSpec specs[] = {{}, {0.6, 0.2, 0.2}, {0.8, 0.1, 0.1}, {1.0 / 3, 1.0 / 3, 1.0 / 3}};
    for (const auto& spec : specs) {
        for (std::size_t n = 10; n <= 1000; ++n) {
            const auto r = split(n, spec);
            REQUIRE(r.train.begin == 0);
            REQUIRE(r.train.end == r.validation.begin);
            REQUIRE(r.validation.end == r.test.begin);
            REQUIRE(r.test.end == n);
            REQUIRE(r.train.size() > 0);
            REQUIRE(r.validation.size() > 0);
            REQUIRE(r.test.size() > 0);
            REQUIRE(r.train.size() + r.validation.size() + r.test.size() == n);
        }
    }
}

}  // TEST_SUITE
