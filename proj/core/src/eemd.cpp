#include "hht/eemd.hpp"

#include <cmath>
#include <random>
#include <string>

#include "hht/error.hpp"
#include "hht/parallel.hpp"

namespace hht {

AlignmentPolicy parse_alignment_policy(std::string_view name) {
    if (name == "pad" || name == "pad_with_zeros" || name == "pad-with-zeros") return AlignmentPolicy::pad_with_zeros;
    if (name == "truncate" || name == "truncate_to_min" || name == "truncate-to-min") {
        return AlignmentPolicy::truncate_to_min;
    }
    throw ConfigError("unknown alignment policy '" + std::string(name) + "'");
}

std::string_view to_string(AlignmentPolicy policy) noexcept {
    return policy == AlignmentPolicy::pad_with_zeros ? "pad_with_zeros" : "truncate_to_min";
}

void EemdConfig::validate() const {
    if (!(noise_amplitude >= 0.0) || !std::isfinite(noise_amplitude)) {
        throw ConfigError("noise amplitude must be a finite nonnegative number");
    }
    if (ensemble_size < 1) throw ConfigError("ensemble size must be at least 1");
    sift.validate();
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial) noexcept {
    // splitmix64 finalizer over the seed advanced by the trial index
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(trial) + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<double> add_white_noise(std::span<const double> series, double amplitude, std::uint64_t seed) {
    if (!(amplitude >= 0.0)) throw ConfigError("noise amplitude must be nonnegative");
    std::vector<double> out(series.begin(), series.end());
    if (amplitude == 0.0 || series.empty()) return out;
    const double sigma = amplitude * std::sqrt(population_variance(series));
    if (sigma == 0.0) return out;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    for (auto& x : out) x += noise(rng);
    return out;
}

namespace {

void accumulate_mean(std::vector<double>& mean, std::span<const double> x, double count) {
    for (std::size_t t = 0; t < mean.size(); ++t) mean[t] += (x[t] - mean[t]) / count;
}

}  // namespace

ImfSet ensemble_average(std::span<const ImfSet> per_trial, AlignmentPolicy policy) {
    if (per_trial.empty()) throw ConfigError("ensemble_average needs at least one trial");
    const std::size_t n = per_trial.front().residue.size();
    std::size_t min_count = per_trial.front().imfs.size();
    std::size_t max_count = min_count;
    for (const auto& trial : per_trial) {
        if (trial.residue.size() != n) throw DimensionError("trials differ in series length");
        for (const auto& imf : trial.imfs) {
            if (imf.values.size() != n) throw DimensionError("IMF length differs from residue length");
        }
        min_count = std::min(min_count, trial.imfs.size());
        max_count = std::max(max_count, trial.imfs.size());
    }
    const std::size_t k_out = policy == AlignmentPolicy::pad_with_zeros ? max_count : min_count;

    ImfSet out;
    out.source_length = n;
    out.imfs.resize(k_out);
    for (std::size_t k = 0; k < k_out; ++k) {
        out.imfs[k].index = k + 1;
        out.imfs[k].values.assign(n, 0.0);
        out.imfs[k].converged = true;
    }
    out.residue.assign(n, 0.0);

    const std::vector<double> zeros(n, 0.0);
    std::vector<double> folded;
    double count = 0.0;
    for (const auto& trial : per_trial) {
        count += 1.0;
        for (std::size_t k = 0; k < k_out; ++k) {
            if (k < trial.imfs.size()) {
                const auto& imf = trial.imfs[k];
                accumulate_mean(out.imfs[k].values, imf.values, count);
                out.imfs[k].converged = out.imfs[k].converged && imf.converged;
                out.imfs[k].sift_iterations = std::max(out.imfs[k].sift_iterations, imf.sift_iterations);
            } else {
                accumulate_mean(out.imfs[k].values, zeros, count);
            }
        }
        if (trial.imfs.size() > k_out) {
            folded = trial.residue;
            for (std::size_t k = k_out; k < trial.imfs.size(); ++k) {
                for (std::size_t t = 0; t < n; ++t) folded[t] += trial.imfs[k].values[t];
            }
            accumulate_mean(out.residue, folded, count);
        } else {
            accumulate_mean(out.residue, trial.residue, count);
        }
    }
    return out;
}

EemdResult eemd(std::span<const double> values, const EemdConfig& config, std::size_t threads) {
    config.validate();
    std::vector<ImfSet> trials(config.ensemble_size);
    parallel_for(config.ensemble_size, threads, [&](std::size_t trial) {
        const auto noisy = add_white_noise(values, config.noise_amplitude, trial_seed(config.seed, trial));
        try {
            trials[trial] = emd(noisy, config.sift);
        } catch (const Error& e) {
            throw Error("EEMD trial " + std::to_string(trial) + ": " + e.what());
        }
    });

    EemdResult result;
    result.trial_imf_counts.reserve(trials.size());
    for (const auto& t : trials) result.trial_imf_counts.push_back(t.imfs.size());
    result.imf_set = ensemble_average(trials, config.alignment_policy);
    result.config_echo = config;
    return result;
}

}  // namespace hht
