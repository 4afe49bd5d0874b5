#pragma once

#include <span>
#include <vector>

namespace lplab {

/// A pair of endpoints lo <= hi. Whether the interval is open or closed is
/// decided by the container: gaps are open, components are closed.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
    bool degenerate() const { return lo == hi; }
    bool contains_closed(double x) const { return lo <= x && x <= hi; }
    bool contains_open(double x) const { return lo < x && x < hi; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Merge intervals (sorted or not) into a sorted list of disjoint ones.
/// Touching intervals are joined.
std::vector<Interval> merge_intervals(std::vector<Interval> intervals);

/// Lebesgue measure of the union.
double union_measure(std::vector<Interval> intervals);

/// Intersection of a closed interval with another; empty result is nullopt-like
/// and reported through the return flag.
bool intersect(const Interval& a, const Interval& b, Interval& out);

} // namespace lplab
