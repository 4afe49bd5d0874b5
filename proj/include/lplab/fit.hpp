#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lplab {

/// Ordinary least squares y = intercept + slope * x.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 1.0;            // 1 when y is constant and perfectly fitted
    double rms_residual = 0.0;
    std::size_t points = 0;
};

LinearFit least_squares(std::span<const double> x, std::span<const double> y);

/// Power-law fit value ~ constant * scale^exponent, done by least squares in
/// log-log space.
struct ExponentFit {
    double exponent = 0.0;
    double constant = 0.0;
    double r2 = 1.0;
    double rms_residual = 0.0;   // in natural-log units
    std::vector<double> scales;  // abscissae actually used
    std::vector<double> values;
    std::size_t points_used() const { return scales.size(); }
};

/// Requires strictly positive inputs and at least `min_points` of them.
ExponentFit fit_power_law(std::span<const double> scales, std::span<const double> values,
                          std::size_t min_points = 2);

} // namespace lplab
