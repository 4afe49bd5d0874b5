#pragma once

#include "lplab/fit.hpp"
#include "lplab/set_model.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace lplab {

/// |(S)_delta|: measure of the open delta-neighbourhood of the components.
double neighborhood_measure(const GapSet& set, double delta);

struct PortionMeasure {
    double measure = 0.0;
    bool empty_portion = false;  // components do not meet the interval
};

/// |((components) cap I)_delta| for a bounded interval I.
PortionMeasure portion_neighborhood(const GapSet& set, Interval portion, double delta);

struct PorosityEstimate {
    double c_hat = 0.0;      // min over scanned I of (longest gap piece in I) / |I|
    Interval witness;        // the minimizing I
    std::size_t scanned = 0;
    int resolution = 0;
};

/// Scans dyadic sub-windows at levels 0..resolution-1 and the intervals
/// between consecutive component midpoints. The result is an upper bound
/// for the porosity constant of the represented set, not a verified value.
PorosityEstimate porosity_estimate(const GapSet& set, int resolution);

struct DimensionFit {
    std::vector<double> scales;
    std::vector<std::size_t> counts;
    std::vector<bool> reliable;
    double slope = 0.0;       // box-dimension estimate from reliable scales
    double r2 = 1.0;
    std::size_t points_used = 0;
};

/// Number of grid cells [x0 + i s, x0 + (i+1) s) met by a component.
/// Endpoints within 1e-9 (relative) of a cell boundary snap onto it, so a
/// closed component ending exactly on a boundary does not claim the next cell.
std::size_t box_count(const GapSet& set, double scale);

/// Covering numbers over strictly decreasing scales and the least-squares
/// slope of log N against log(1/scale). Scales below the truncation
/// resolution are flagged unreliable and excluded from the fit: coarser
/// grids cannot see features smaller than one cell.
DimensionFit box_counting(const GapSet& set, std::span<const double> scales);

/// 2 delta * #{k : delta_k > 2 delta}.
double gap_lower_bound(const GapSequence& seq, double delta);

struct Theorem2Fit {
    ExponentFit fit;                 // measure ~ constant * delta^exponent
    double p = 0.0;
    double q = 0.0;                  // conjugate exponent p/(p-1)
    double bound_exponent = 0.0;     // 1 - 2/q
    double tolerance = 0.0;
    bool consistent = false;         // fitted exponent >= bound_exponent - tolerance
    double c_empirical = 0.0;        // smallest c with measure <= c |I|^{2/q} delta^{1-2/q} on the grid
    std::vector<double> deltas;
    std::vector<double> measures;
    std::vector<bool> reliable;
};

/// Log-log fit of portion_neighborhood(set, I, delta) over the reliable part
/// of delta_grid. Needs p in (1, 2] and at least 4 reliable points.
Theorem2Fit theorem2_fit(const GapSet& set, Interval portion, std::span<const double> delta_grid,
                         double p = 4.0 / 3.0, double tolerance = 0.05);

} // namespace lplab
