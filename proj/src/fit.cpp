#include "lplab/fit.hpp"

#include "lplab/errors.hpp"

#include <cmath>
#include <string>

namespace lplab {

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ValidationError("x and y differ in length");
    const std::size_t n = x.size();
    if (n < 2) throw ValidationError("least squares needs at least 2 points");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw ValidationError("least squares needs distinct abscissae");

    LinearFit fit;
    fit.points = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += r * r;
    }
    fit.rms_residual = std::sqrt(ss_res / double(n));
    fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

ExponentFit fit_power_law(std::span<const double> scales, std::span<const double> values,
                          std::size_t min_points) {
    if (scales.size() != values.size()) throw ValidationError("scales and values differ in length");
    if (scales.size() < min_points) {
        throw ValidationError("need at least " + std::to_string(min_points) + " points, got " +
                              std::to_string(scales.size()));
    }
    std::vector<double> lx, ly;
    lx.reserve(scales.size());
    ly.reserve(values.size());
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (!(scales[i] > 0.0) || !(values[i] > 0.0)) {
            throw ValidationError("power-law fit requires positive scales and values");
        }
        lx.push_back(std::log(scales[i]));
        ly.push_back(std::log(values[i]));
    }
    const LinearFit lin = least_squares(lx, ly);
    ExponentFit out;
    out.exponent = lin.slope;
    out.constant = std::exp(lin.intercept);
    out.r2 = lin.r2;
    out.rms_residual = lin.rms_residual;
    out.scales.assign(scales.begin(), scales.end());
    out.values.assign(values.begin(), values.end());
    return out;
}

} // namespace lplab
