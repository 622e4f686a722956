#include "hht/emd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hht/error.hpp"
#include "hht/spline.hpp"

namespace hht {

BoundaryPolicy parse_boundary_policy(std::string_view name) {
    if (name == "mirror") return BoundaryPolicy::mirror;
    if (name == "clamp") return BoundaryPolicy::clamp;
    throw ConfigError("unknown boundary policy '" + std::string(name) + "'");
}

std::string_view to_string(BoundaryPolicy policy) noexcept {
    return policy == BoundaryPolicy::mirror ? "mirror" : "clamp";
}

void SiftConfig::validate() const {
    if (max_imfs < 1) throw ConfigError("max_imfs must be at least 1");
    if (max_sift_iterations < 1) throw ConfigError("max_sift_iterations must be at least 1");
    if (!(sd_threshold > 0.0)) throw ConfigError("sd_threshold must be positive");
    if (!(envelope_tolerance > 0.0)) throw ConfigError("envelope_tolerance must be positive");
}

std::vector<double> ImfSet::reconstruct() const {
    std::vector<double> out = residue;
    for (const auto& imf : imfs) {
        for (std::size_t t = 0; t < out.size(); ++t) out[t] += imf.values[t];
    }
    return out;
}

Extrema find_extrema(std::span<const double> v) {
    if (v.size() < 3) throw InsufficientExtrema("find_extrema needs at least 3 samples");
    Extrema out;
    const std::size_t n = v.size();
    std::size_t i = 1;
    while (i + 1 < n) {
        if (v[i] == v[i - 1]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && v[j + 1] == v[i]) ++j;
        if (j + 1 >= n) break;
        const std::size_t mid = i + (j - i) / 2;
        if (v[i] > v[i - 1] && v[j + 1] < v[i]) {
            out.maxima.push_back({mid, v[mid]});
        } else if (v[i] < v[i - 1] && v[j + 1] > v[i]) {
            out.minima.push_back({mid, v[mid]});
        }
        i = j + 1;
    }
    return out;
}

std::size_t count_zero_crossings(std::span<const double> values) {
    std::size_t crossings = 0;
    int previous = 0;
    for (double x : values) {
        const int sign = (x > 0.0) - (x < 0.0);
        if (sign == 0) continue;
        if (previous != 0 && sign != previous) ++crossings;
        previous = sign;
    }
    return crossings;
}

std::vector<double> envelope(std::span<const double> values, std::span<const Extremum> extrema,
                             BoundaryPolicy policy) {
    const std::size_t n = values.size();
    if (n == 0) throw InsufficientExtrema("envelope of an empty series");
    const double last = static_cast<double>(n - 1);
    std::vector<double> x;
    std::vector<double> y;
    x.reserve(extrema.size() + 4);
    y.reserve(extrema.size() + 4);

    const auto push = [&](double xi, double yi) {
        if (!x.empty() && xi <= x.back()) return;
        x.push_back(xi);
        y.push_back(yi);
    };

    if (policy == BoundaryPolicy::mirror) {
        const std::size_t k = std::min<std::size_t>(2, extrema.size());
        for (std::size_t j = k; j-- > 0;) push(-static_cast<double>(extrema[j].index), extrema[j].value);
        for (const auto& e : extrema) push(static_cast<double>(e.index), e.value);
        for (std::size_t j = 0; j < k; ++j) {
            const auto& e = extrema[extrema.size() - 1 - j];
            push(2.0 * last - static_cast<double>(e.index), e.value);
        }
    } else {
        if (extrema.empty() || extrema.front().index > 0) push(0.0, values.front());
        for (const auto& e : extrema) push(static_cast<double>(e.index), e.value);
        if (extrema.empty() || extrema.back().index + 1 < n) push(last, values.back());
    }

    if (x.size() < 2) throw InsufficientExtrema("envelope needs at least 2 knots after boundary augmentation");
    return NaturalCubicSpline(x, y).sample(n);
}

std::vector<double> envelope_mean(std::span<const double> values, BoundaryPolicy policy) {
    const auto ext = find_extrema(values);
    if (ext.maxima.empty() || ext.minima.empty()) {
        throw InsufficientExtrema("series has " + std::to_string(ext.maxima.size()) + " maxima and " +
                                  std::to_string(ext.minima.size()) + " minima");
    }
    auto upper = envelope(values, ext.maxima, policy);
    const auto lower = envelope(values, ext.minima, policy);
    for (std::size_t t = 0; t < upper.size(); ++t) upper[t] = 0.5 * (upper[t] + lower[t]);
    return upper;
}

SiftResult sift_once(std::span<const double> h, const SiftConfig& config) {
    SiftResult result;
    result.envelope_mean = envelope_mean(h, config.boundary_policy);
    result.next.resize(h.size());
    for (std::size_t t = 0; t < h.size(); ++t) result.next[t] = h[t] - result.envelope_mean[t];
    return result;
}

bool satisfies_extrema_condition(std::span<const double> values) {
    if (values.size() < 3) return false;
    const auto extrema = find_extrema(values).count();
    const auto crossings = count_zero_crossings(values);
    return (extrema > crossings ? extrema - crossings : crossings - extrema) <= 1;
}

Imf extract_imf(std::span<const double> residual, const SiftConfig& config, std::size_t index) {
    const auto ext = find_extrema(residual);
    if (ext.maxima.empty() || ext.minima.empty()) {
        throw InsufficientExtrema("residual has no oscillation to sift (" + std::to_string(ext.count()) +
                                  " interior extrema)");
    }

    Imf imf;
    imf.index = index;
    imf.converged = false;
    std::vector<double> h(residual.begin(), residual.end());

    // Candidate h is accepted when its own envelope mean m is negligible:
    // SD = sum(m^2) / sum(h^2), i.e. the change the next sift would make.
    for (std::size_t k = 0;; ++k) {
        std::vector<double> m;
        try {
            m = envelope_mean(h, config.boundary_policy);
        } catch (const InsufficientExtrema&) {
            // The candidate stopped oscillating; keep what we have.
            imf.converged = satisfies_extrema_condition(h);
            break;
        }
        double diff = 0.0;
        double norm = 0.0;
        double mean_peak = 0.0;
        double peak = 0.0;
        const std::size_t trim = static_cast<std::size_t>(config.edge_exclusion * static_cast<double>(h.size()));
        for (std::size_t t = trim; t < h.size() - trim; ++t) {
            diff += m[t] * m[t];
            norm += h[t] * h[t];
            mean_peak = std::max(mean_peak, std::abs(m[t]));
            peak = std::max(peak, std::abs(h[t]));
        }
        const double sd = norm > 0.0 ? diff / norm : 0.0;
        if (satisfies_extrema_condition(h) && (sd < config.sd_threshold || mean_peak <= config.envelope_tolerance * peak)) {
            imf.converged = true;
            break;
        }
        if (k == config.max_sift_iterations) break;
        for (std::size_t t = 0; t < h.size(); ++t) h[t] -= m[t];
        imf.sift_iterations = k + 1;
    }
    imf.values = std::move(h);
    return imf;
}

ImfSet emd(std::span<const double> values, const SiftConfig& config) {
    config.validate();
    if (values.size() < 8) throw DataError("emd needs at least 8 samples, got " + std::to_string(values.size()));
    for (std::size_t t = 0; t < values.size(); ++t) {
        if (!std::isfinite(values[t])) throw NumericError("non-finite input at sample " + std::to_string(t));
    }

    ImfSet set;
    set.source_length = values.size();
    std::vector<double> r(values.begin(), values.end());
    while (set.imfs.size() < config.max_imfs) {
        const auto ext = find_extrema(r);
        if (ext.maxima.empty() || ext.minima.empty()) break;
        auto imf = extract_imf(r, config, set.imfs.size() + 1);
        for (std::size_t t = 0; t < r.size(); ++t) r[t] -= imf.values[t];
        set.imfs.push_back(std::move(imf));
    }
    set.residue = std::move(r);
    return set;
}

}  // namespace hht
