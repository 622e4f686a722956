#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace hht::testing {

/// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("hht-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

/// Random-walk 4h OHLCV bars with a weak cycle, consistent high/low bounds.
inline std::string synthetic_ohlcv_csv(std::size_t bars, std::uint64_t seed = 11, std::int64_t start = 1514764800,
                                       std::int64_t interval = 14400) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> step(0.0002, 0.012);
    std::normal_distribution<double> wick(0.0, 0.004);
    std::gamma_distribution<double> volume(2.0, 500.0);
    std::ostringstream out;
    out.precision(10);
    out << "timestamp,open,high,low,close,volume\n";
    double log_price = std::log(13000.0);
    double prev_close = 13000.0;
    for (std::size_t i = 0; i < bars; ++i) {
        log_price += step(rng);
        const double close =
            std::exp(log_price + 0.04 * std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / 42.0));
        const double open = prev_close;
        const double high = std::max(open, close) * (1.0 + std::abs(wick(rng)));
        const double low = std::min(open, close) * (1.0 - std::abs(wick(rng)));
        out << start + static_cast<std::int64_t>(i) * interval << ',' << open << ',' << high << ',' << low << ','
            << close << ',' << volume(rng) << '\n';
        prev_close = close;
    }
    return out.str();
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b, std::size_t begin, std::size_t end) {
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        ma += a[i];
        mb += b[i];
    }
    const auto n = static_cast<double>(end - begin);
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

inline double rms(const std::vector<double>& v, std::size_t begin, std::size_t end) {
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += v[i] * v[i];
    return std::sqrt(s / static_cast<double>(end - begin));
}

}  // namespace hht::testing
