#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "hht/data.hpp"

namespace hht {

struct Extremum {
    std::size_t index = 0;
    double value = 0.0;
    friend bool operator==(const Extremum&, const Extremum&) = default;
};

struct Extrema {
    std::vector<Extremum> maxima;
    std::vector<Extremum> minima;

    std::size_t count() const noexcept { return maxima.size() + minima.size(); }
};

/// How envelope splines are anchored beyond the first and last extremum.
///  - mirror: reflect the two nearest extrema across each end sample.
///  - clamp:  add the end sample itself as a knot.
enum class BoundaryPolicy { mirror, clamp };

BoundaryPolicy parse_boundary_policy(std::string_view name);
std::string_view to_string(BoundaryPolicy policy) noexcept;

struct SiftConfig {
    std::size_t max_imfs = 7;
    std::size_t max_sift_iterations = 50;
    /// A candidate h is accepted once SD = sum(m^2) / sum(h^2) drops below
    /// this, m being its envelope mean (so h - m is the next sift).
    double sd_threshold = 0.01;
    /// The envelope mean also counts as zero once its peak is below this
    /// fraction of the candidate's peak.
    double envelope_tolerance = 1e-6;
    BoundaryPolicy boundary_policy = BoundaryPolicy::mirror;
    /// Fraction of samples at each end left out of the stopping statistics,
    /// where spline end swings dominate.
    double edge_exclusion = 0.1;

    void validate() const;
};

struct Imf {
    std::vector<double> values;
    std::size_t index = 0;          // 1-based extraction order
    std::size_t sift_iterations = 0;
    bool converged = true;          // false: iteration cap hit, best-effort result

    friend bool operator==(const Imf&, const Imf&) = default;
};

/// IMFs ordered from high to low frequency plus the final residue. The
/// element-wise sum of all IMFs and the residue reproduces the source.
struct ImfSet {
    std::vector<Imf> imfs;
    std::vector<double> residue;
    std::size_t source_length = 0;

    std::vector<double> reconstruct() const;
    friend bool operator==(const ImfSet&, const ImfSet&) = default;
};

/// Strict interior extrema by three-point comparison. A run of equal values
/// bounded by lower (or higher) neighbours on both sides counts once, at the
/// midpoint of the run. End samples are never extrema.
Extrema find_extrema(std::span<const double> values);

/// Sign changes between consecutive samples; zeros are skipped so that a
/// zero sample between opposite-signed neighbours counts as one crossing.
std::size_t count_zero_crossings(std::span<const double> values);

/// Natural cubic spline through the extrema (augmented at both ends per the
/// boundary policy) sampled at every index of `values`.
std::vector<double> envelope(std::span<const double> values, std::span<const Extremum> extrema,
                             BoundaryPolicy policy);

struct SiftResult {
    std::vector<double> next;           // h - m
    std::vector<double> envelope_mean;  // m
};

/// One sifting pass: subtract the mean of the upper and lower envelopes.
/// Throws InsufficientExtrema when h lacks a maximum or a minimum.
SiftResult sift_once(std::span<const double> h, const SiftConfig& config);

/// Pointwise mean of the upper and lower envelopes of `values`.
std::vector<double> envelope_mean(std::span<const double> values, BoundaryPolicy policy);

/// True when extrema and zero-crossing counts differ by at most one.
bool satisfies_extrema_condition(std::span<const double> values);

/// Sifts `residual` until the IMF test passes or the iteration cap is hit.
Imf extract_imf(std::span<const double> residual, const SiftConfig& config, std::size_t index = 1);

ImfSet emd(std::span<const double> values, const SiftConfig& config = {});
inline ImfSet emd(const TimeSeries& series, const SiftConfig& config = {}) { return emd(series.values, config); }

}  // namespace hht
