#pragma once

#include <span>
#include <vector>

namespace hht {

/// Cubic spline through a set of knots with strictly increasing abscissae.
/// The second derivative at the two end knots is prescribed; the default of
/// zero at both ends gives the natural spline.
class NaturalCubicSpline {
public:
    NaturalCubicSpline(std::span<const double> x, std::span<const double> y, double start_curvature = 0.0,
                       double end_curvature = 0.0);

    double operator()(double t) const;

    /// Evaluates at t = 0, 1, ..., n - 1 in a single sweep.
    std::vector<double> sample(std::size_t n) const;

    std::size_t knot_count() const noexcept { return x_.size(); }

private:
    double eval_segment(std::size_t k, double t) const;

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_;  // second derivatives at the knots
};

}  // namespace hht
