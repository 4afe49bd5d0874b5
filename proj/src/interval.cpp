#include "lplab/interval.hpp"

#include <algorithm>

namespace lplab {

std::vector<Interval> merge_intervals(std::vector<Interval> intervals) {
    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    std::vector<Interval> merged;
    merged.reserve(intervals.size());
    for (const auto& iv : intervals) {
        if (!merged.empty() && iv.lo <= merged.back().hi) {
            merged.back().hi = std::max(merged.back().hi, iv.hi);
        } else {
            merged.push_back(iv);
        }
    }
    return merged;
}

double union_measure(std::vector<Interval> intervals) {
    double total = 0.0;
    for (const auto& iv : merge_intervals(std::move(intervals))) total += iv.length();
    return total;
}

bool intersect(const Interval& a, const Interval& b, Interval& out) {
    const double lo = std::max(a.lo, b.lo);
    const double hi = std::min(a.hi, b.hi);
    if (lo > hi) return false;
    out = {lo, hi};
    return true;
}

} // namespace lplab
