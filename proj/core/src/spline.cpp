#include "hht/spline.hpp"

#include <algorithm>
#include <string>

#include "hht/error.hpp"

namespace hht {

NaturalCubicSpline::NaturalCubicSpline(std::span<const double> x, std::span<const double> y, double start_curvature,
                                       double end_curvature)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()), m_(x.size(), 0.0) {
    if (x.size() != y.size()) throw DimensionError("spline knot arrays differ in length");
    if (x.size() < 2) throw InsufficientExtrema("spline needs at least 2 knots, got " + std::to_string(x.size()));
    for (std::size_t i = 1; i < x_.size(); ++i) {
        if (!(x_[i] > x_[i - 1])) throw ConfigError("spline knots must be strictly increasing");
    }

    const std::size_t n = x_.size();
    m_.front() = start_curvature;
    m_.back() = end_curvature;
    if (n == 2) return;

    // Tridiagonal system for the interior second derivatives (Thomas algorithm).
    const std::size_t m = n - 2;
    std::vector<double> diag(m), upper(m), rhs(m);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x_[i] - x_[i - 1];
        const double h1 = x_[i + 1] - x_[i];
        diag[i - 1] = 2.0 * (h0 + h1);
        upper[i - 1] = h1;
        rhs[i - 1] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    }
    rhs.front() -= (x_[1] - x_[0]) * start_curvature;
    rhs.back() -= (x_[n - 1] - x_[n - 2]) * end_curvature;
    // Sub-diagonal entry of row r is h_{r} = x[r+1] - x[r], equal to upper[r - 1].
    for (std::size_t r = 1; r < m; ++r) {
        const double w = upper[r - 1] / diag[r - 1];
        diag[r] -= w * upper[r - 1];
        rhs[r] -= w * rhs[r - 1];
    }
    m_[m] = rhs[m - 1] / diag[m - 1];
    for (std::size_t r = m - 1; r-- > 0;) {
        m_[r + 1] = (rhs[r] - upper[r] * m_[r + 2]) / diag[r];
    }
}

double NaturalCubicSpline::eval_segment(std::size_t k, double t) const {
    const double h = x_[k + 1] - x_[k];
    const double a = (x_[k + 1] - t) / h;
    const double b = (t - x_[k]) / h;
    return a * y_[k] + b * y_[k + 1] + ((a * a * a - a) * m_[k] + (b * b * b - b) * m_[k + 1]) * (h * h) / 6.0;
}

double NaturalCubicSpline::operator()(double t) const {
    const auto it = std::upper_bound(x_.begin(), x_.end(), t);
    std::size_t k = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    k = std::min(k, x_.size() - 2);
    return eval_segment(k, t);
}

std::vector<double> NaturalCubicSpline::sample(std::size_t n) const {
    std::vector<double> out(n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i);
        while (k + 2 < x_.size() && t >= x_[k + 1]) ++k;
        out[i] = eval_segment(k, t);
    }
    return out;
}

}  // namespace hht
