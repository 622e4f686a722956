#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "hht/emd.hpp"

namespace hht {

/// How trials that produced different IMF counts are combined.
///  - pad_with_zeros:  missing IMFs count as zero series; every IMF is
///                     averaged over the full ensemble.
///  - truncate_to_min: keep the smallest trial count; IMFs beyond it are
///                     folded into that trial's residue before averaging.
enum class AlignmentPolicy { pad_with_zeros, truncate_to_min };

AlignmentPolicy parse_alignment_policy(std::string_view name);
std::string_view to_string(AlignmentPolicy policy) noexcept;

struct EemdConfig {
    /// Standard deviation of the added noise, as a fraction of the signal's.
    double noise_amplitude = 0.2;
    std::size_t ensemble_size = 100;
    std::uint64_t seed = 0;
    SiftConfig sift{};
    AlignmentPolicy alignment_policy = AlignmentPolicy::pad_with_zeros;

    void validate() const;
};

struct EemdResult {
    ImfSet imf_set;
    std::vector<std::size_t> trial_imf_counts;
    EemdConfig config_echo;
};

/// Seed for trial `trial` of an ensemble seeded with `seed`.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial) noexcept;

/// Adds i.i.d. Gaussian noise with standard deviation amplitude * std(series).
std::vector<double> add_white_noise(std::span<const double> series, double amplitude, std::uint64_t seed);

/// Element-wise mean of per-trial decompositions. Trials are combined in
/// list order.
ImfSet ensemble_average(std::span<const ImfSet> per_trial, AlignmentPolicy policy);

/// Noise-assisted EMD. `threads` only affects wall time, never the result.
EemdResult eemd(std::span<const double> values, const EemdConfig& config = {}, std::size_t threads = 1);
inline EemdResult eemd(const TimeSeries& series, const EemdConfig& config = {}, std::size_t threads = 1) {
    return eemd(series.values, config, threads);
}

}  // namespace hht
