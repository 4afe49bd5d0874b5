#include "lplab/thickness.hpp"

#include "lplab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace lplab {

namespace {

void require_delta(double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw ValidationError("must be positive", "delta");
}

// Measure of the union of (c.lo - delta, c.hi + delta) over sorted intervals.
double dilated_measure(const std::vector<Interval>& sorted, double delta) {
    double total = 0.0;
    bool open = false;
    double lo = 0.0, hi = 0.0;
    for (const auto& c : sorted) {
        const double a = c.lo - delta, b = c.hi + delta;
        if (open && a <= hi) {
            hi = std::max(hi, b);
            continue;
        }
        if (open) total += hi - lo;
        lo = a;
        hi = b;
        open = true;
    }
    if (open) total += hi - lo;
    return total;
}

double snap(double t) {
    const double r = std::nearbyint(t);
    return std::fabs(t - r) <= 1e-9 * std::max(1.0, std::fabs(t)) ? r : t;
}

} // namespace

double neighborhood_measure(const GapSet& set, double delta) {
    require_delta(delta);
    return dilated_measure(set.components(), delta);
}

PortionMeasure portion_neighborhood(const GapSet& set, Interval portion, double delta) {
    require_delta(delta);
    if (!std::isfinite(portion.lo) || !std::isfinite(portion.hi) || portion.hi < portion.lo) {
        throw ValidationError("portion must be a bounded interval", "interval");
    }
    std::vector<Interval> clipped;
    for (const auto& c : set.components()) {
        Interval piece;
        if (intersect(c, portion, piece)) clipped.push_back(piece);
    }
    PortionMeasure out;
    out.empty_portion = clipped.empty();
    out.measure = clipped.empty() ? 0.0 : dilated_measure(clipped, delta);
    return out;
}

PorosityEstimate porosity_estimate(const GapSet& set, int resolution) {
    if (resolution < 1) throw ValidationError("must be >= 1", "resolution");
    if (resolution > 30) throw ValidationError("must be <= 30", "resolution");

    PorosityEstimate est;
    est.resolution = resolution;
    est.witness = set.window();
    const auto& gaps = set.gaps();
    const Interval w = set.window();
    if (gaps.empty() || w.degenerate()) return est;

    double best = std::numeric_limits<double>::infinity();
    auto consider = [&](const Interval& I, double ratio) {
        ++est.scanned;
        if (ratio < best) {
            best = ratio;
            est.witness = I;
        }
    };

    for (int level = 0; level < resolution; ++level) {
        const std::uint64_t pieces = std::uint64_t(1) << level;
        const double width = w.length() / double(pieces);
        std::size_t g = 0;
        for (std::uint64_t i = 0; i < pieces; ++i) {
            const double u = w.lo + double(i) * width;
            const double v = (i + 1 == pieces) ? w.hi : w.lo + double(i + 1) * width;
            while (g < gaps.size() && gaps[g].hi <= u) ++g;
            double longest = 0.0;
            for (std::size_t h = g; h < gaps.size() && gaps[h].lo < v; ++h) {
                longest = std::max(longest, std::min(gaps[h].hi, v) - std::max(gaps[h].lo, u));
            }
            consider({u, v}, longest / (v - u));
        }
    }

    const auto comps = set.components();
    for (std::size_t i = 0; i + 1 < comps.size(); ++i) {
        const Interval I{comps[i].midpoint(), comps[i + 1].midpoint()};
        consider(I, gaps[i].length() / I.length());
    }
    est.c_hat = best;
    return est;
}

std::size_t box_count(const GapSet& set, double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) throw ValidationError("must be positive", "scales");
    const double x0 = set.window().lo;
    std::size_t count = 0;
    std::int64_t last = std::numeric_limits<std::int64_t>::min();
    for (const auto& c : set.components()) {
        const auto first = std::int64_t(std::floor(snap((c.lo - x0) / scale)));
        auto end = std::int64_t(std::ceil(snap((c.hi - x0) / scale))) - 1;
        if (end < first) end = first;
        if (end <= last) continue;
        const std::int64_t from = std::max(first, last + 1);
        count += std::size_t(end - from + 1);
        last = end;
    }
    return count;
}

DimensionFit box_counting(const GapSet& set, std::span<const double> scales) {
    if (scales.empty()) throw ValidationError("no scales given", "scales");
    const double width = set.window().length();
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (!(scales[i] > 0.0)) throw ValidationError("scales must be positive", "scales");
        if (i > 0 && !(scales[i] < scales[i - 1])) {
            throw ValidationError("scales must be strictly decreasing", "scales");
        }
        if (width > 0.0 && !(scales[i] < width)) {
            throw ValidationError("scales must be smaller than the window", "scales");
        }
    }

    DimensionFit out;
    std::vector<double> lx, ly;
    for (double s : scales) {
        const std::size_t n = box_count(set, s);
        const bool ok = s >= set.resolution() * (1.0 - 1e-9);
        out.scales.push_back(s);
        out.counts.push_back(n);
        out.reliable.push_back(ok);
        if (ok) {
            lx.push_back(std::log(1.0 / s));
            ly.push_back(std::log(double(n)));
        }
    }
    out.points_used = lx.size();
    if (lx.size() < 2) {
        throw ReliabilityError("box counting: fewer than 2 scales above the truncation resolution " +
                               std::to_string(set.resolution()));
    }
    const LinearFit lin = least_squares(lx, ly);
    out.slope = lin.slope;
    out.r2 = lin.r2;
    return out;
}

double gap_lower_bound(const GapSequence& seq, double delta) {
    require_delta(delta);
    std::size_t count = 0;
    for (double d : seq.deltas()) {
        if (d > 2.0 * delta) ++count;
    }
    return 2.0 * delta * double(count);
}

Theorem2Fit theorem2_fit(const GapSet& set, Interval portion, std::span<const double> delta_grid,
                         double p, double tolerance) {
    if (!(p > 1.0 && p <= 2.0)) throw ValidationError("p must lie in (1, 2]", "p");
    if (!(tolerance >= 0.0)) throw ValidationError("must be >= 0", "tolerance");

    Theorem2Fit out;
    out.p = p;
    out.q = p / (p - 1.0);
    out.bound_exponent = 1.0 - 2.0 / out.q;
    out.tolerance = tolerance;

    std::vector<double> xs, ys;
    const double span_pow = std::pow(portion.length(), 2.0 / out.q);
    for (double delta : delta_grid) {
        const PortionMeasure m = portion_neighborhood(set, portion, delta);
        const bool ok = delta >= set.reliable_delta() && m.measure > 0.0;
        out.deltas.push_back(delta);
        out.measures.push_back(m.measure);
        out.reliable.push_back(ok);
        if (ok) {
            xs.push_back(delta);
            ys.push_back(m.measure);
            const double shape = span_pow * std::pow(delta, out.bound_exponent);
            out.c_empirical = std::max(out.c_empirical, m.measure / shape);
        }
    }
    if (xs.size() < 4) {
        throw ReliabilityError("theorem2 fit: fewer than 4 reliable grid points (need delta >= " +
                               std::to_string(set.reliable_delta()) + ")");
    }
    out.fit = fit_power_law(xs, ys, 4);
    out.consistent = out.fit.exponent >= out.bound_exponent - tolerance;
    return out;
}

} // namespace lplab
