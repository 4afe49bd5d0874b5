#include "lplab/errors.hpp"
#include "lplab/set_model.hpp"
#include "lplab/thickness.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace lplab;

namespace {

GapSet exact_interval(double lo, double hi) {
    GapSetMeta meta;
    meta.resolution = 0.0;
    return GapSet::from_gaps({lo, hi}, {}, 0, meta);
}

GapSet exact_points(std::vector<double> pts) {
    GapSetMeta meta;
    meta.resolution = 0.0;
    return GapSet::from_points(std::move(pts), 0, meta);
}

// Union of two sets given by their components; window is the hull.
GapSet union_of(const GapSet& a, const GapSet& b) {
    auto comps = a.components();
    for (const auto& c : b.components()) comps.push_back(c);
    comps = merge_intervals(comps);
    std::vector<Interval> gaps;
    for (std::size_t i = 1; i < comps.size(); ++i) gaps.push_back({comps[i - 1].hi, comps[i].lo});
    GapSetMeta meta;
    meta.resolution = 0.0;
    return GapSet::from_gaps({comps.front().lo, comps.back().hi}, gaps, 0, meta);
}

// Independent box count: test each cell against each component.
std::size_t brute_box_count(const GapSet& s, double scale) {
    const double x0 = s.window().lo;
    const long cells = long(std::ceil(s.window().length() / scale)) + 1;
    std::size_t n = 0;
    for (long i = 0; i < cells; ++i) {
        const double a = x0 + double(i) * scale, b = x0 + double(i + 1) * scale;
        for (const auto& c : s.components()) {
            const bool meets = c.degenerate() ? (c.lo >= a - 1e-12 && c.lo < b - 1e-12)
                                              : (c.lo < b - 1e-12 && c.hi > a + 1e-12);
            if (meets) {
                ++n;
                break;
            }
        }
    }
    return n;
}

// Measure of the union of [x - d, x + d] over the given points.
double union_measure(std::vector<double> pts, double d) {
    std::sort(pts.begin(), pts.end());
    double total = 0.0, lo = pts[0] - d, hi = pts[0] + d;
    for (double x : pts) {
        if (x - d > hi) {
            total += hi - lo;
            lo = x - d;
        }
        hi = x + d;
    }
    return total + hi - lo;
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / double(x.size());
        my += y[i] / double(x.size());
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

} // namespace

TEST_CASE("neighbourhood of two points") {
    CHECK(neighborhood_measure(exact_points({0, 1}), 0.1) == doctest::Approx(0.4));
}

TEST_CASE("neighbourhood of cantor depth 1 matches interval arithmetic") {
    // (-0.1, 13/30) u (17/30, 1.1)
    CHECK(neighborhood_measure(cantor_triadic(1), 0.1) == doctest::Approx(16.0 / 15).epsilon(1e-14));
    CHECK_THROWS_AS(neighborhood_measure(cantor_triadic(1), 0.0), ValidationError);
    CHECK_THROWS_AS(neighborhood_measure(cantor_triadic(1), -1.0), ValidationError);
}

TEST_CASE("portion neighbourhood") {
    const auto c1 = cantor_triadic(1);
    CHECK(portion_neighborhood(c1, {0, 1.0 / 3}, 0.1).measure == doctest::Approx(8.0 / 15).epsilon(1e-14));
    const auto far = portion_neighborhood(c1, {5, 6}, 0.1);
    CHECK(far.measure == 0.0);
    CHECK(far.empty_portion);
    CHECK(portion_neighborhood(c1, c1.window(), 0.1).measure == neighborhood_measure(c1, 0.1));
}

TEST_CASE("neighbourhood monotonicity and bounds") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-12, -1);
    const std::vector<GapSet> sets{cantor_triadic(6), dyadic_set(-4, 6), exact_points({0, 1}),
                                   generated_set(GapSequence::normalized_geometric(0.7), 6)};
    for (const auto& s : sets) {
        double min_gap = INFINITY;
        for (const auto& g : s.gaps()) min_gap = std::min(min_gap, g.length());
        std::vector<double> deltas;
        for (int i = 0; i < 40; ++i) deltas.push_back(std::exp2(u(rng)));
        std::sort(deltas.begin(), deltas.end());
        double prev = 0.0;
        for (double d : deltas) {
            const double m = neighborhood_measure(s, d);
            CHECK(m > prev);
            CHECK(m >= 2 * d);
            CHECK(m <= s.window().length() + 2 * d + 1e-12);
            if (d <= min_gap / 2) CHECK(m >= 2 * d * double(s.component_count()) - 1e-12);
            const Interval I{s.window().lo + 0.25 * s.window().length(), s.window().hi};
            CHECK(portion_neighborhood(s, I, d).measure <= m + 1e-12);
            prev = m;
        }
    }
}

TEST_CASE("porosity scan") {
    const auto two = exact_points({0, 1});
    CHECK(porosity_estimate(two, 8).c_hat >= 1.0 / 3);
    CHECK(porosity_estimate(exact_interval(0, 1), 8).c_hat == 0.0);
    const auto c8 = cantor_triadic(8);
    const auto a = porosity_estimate(c8, 8);
    const auto b = porosity_estimate(c8, 12);
    CHECK(a.c_hat > 0.0);
    CHECK(a.c_hat < 1.0);
    CHECK(std::fabs(a.c_hat - b.c_hat) <= 0.1 * a.c_hat);
    CHECK(a.witness.length() > 0.0);
    CHECK_THROWS_AS(porosity_estimate(c8, 0), ValidationError);
}

TEST_CASE("box counting on cantor matches 2^n") {
    const auto c10 = cantor_triadic(10);
    std::vector<double> scales;
    for (int n = 1; n <= 8; ++n) scales.push_back(std::pow(3.0, -n));
    const auto fit = box_counting(c10, scales);
    for (int n = 1; n <= 8; ++n) CHECK(fit.counts[std::size_t(n - 1)] == (std::size_t(1) << n));
    CHECK(fit.slope == doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-9));
    CHECK(fit.points_used == 8);
}

TEST_CASE("box counting trivial sets") {
    std::vector<double> scales;
    for (int n = 1; n <= 10; ++n) scales.push_back(std::ldexp(1.0, -n));
    CHECK(box_counting(exact_points({0.3}), scales).slope == doctest::Approx(0.0));
    CHECK(box_counting(exact_interval(0, 1), scales).slope == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(box_counting(exact_interval(0, 1), std::vector<double>{0.1, 0.2}), ValidationError);
    CHECK_THROWS_AS(box_counting(exact_interval(0, 1), std::vector<double>{2.0, 0.1}), ValidationError);
    // below the truncation resolution every scale is unreliable
    CHECK_THROWS_AS(box_counting(cantor_triadic(2), std::vector<double>{0.05, 0.01}), ReliabilityError);
}

TEST_CASE("box counts agree with a brute-force cell scan and respect unions") {
    const auto a = cantor_triadic(5);
    const auto b = exact_points({0.4, 0.45, 0.5, 0.93});
    const auto u = union_of(a, b);
    for (double s : {0.3, 0.1, 0.05, 0.02, 0.011}) {
        CHECK(box_count(a, s) == brute_box_count(a, s));
        CHECK(box_count(u, s) >= std::max(box_count(a, s), box_count(b, s)));
    }
    // counts are non-increasing in the scale
    const auto fit = box_counting(cantor_triadic(8), std::vector<double>{0.5, 0.2, 0.1, 0.05, 0.01, 0.005});
    for (std::size_t i = 1; i < fit.counts.size(); ++i) CHECK(fit.counts[i] >= fit.counts[i - 1]);
    CHECK(fit.slope >= 0.0);
    CHECK(fit.slope <= 1.0);
}

TEST_CASE("gap lower bound") {
    const auto seq = GapSequence::normalized_geometric(std::log(2.0));
    CHECK(gap_lower_bound(seq, 0.05) == doctest::Approx(0.3));
    CHECK(gap_lower_bound(seq, 0.25) == 0.0);
    CHECK(gap_lower_bound(seq, 0.3) == 0.0);
}

TEST_CASE("gap lower bound for a e^{-kb} follows the closed form") {
    for (double b : {0.3, 0.7, 1.5}) {
        const double a = 2.0;
        const auto seq = GapSequence::geometric(a, b);
        for (double delta : {1e-2, 3e-3, 1e-4, 1e-6}) {
            const double x = std::log(a / (2 * delta)) / b;
            const double got = gap_lower_bound(seq, delta);
            // guard the floor against x landing on an integer
            if (std::fabs(x - std::round(x)) > 1e-9) CHECK(got == doctest::Approx(2 * delta * std::floor(x)));
            CHECK(got >= 2 * delta * (x - 1) - 1e-15);
        }
    }
}

TEST_CASE("generated sets dominate the gap lower bound") {
    for (double b : {0.5, std::log(2.0), 1.2}) {
        const auto seq = GapSequence::normalized_geometric(b);
        const auto s = generated_set(seq, 10);
        for (int j = 2; j <= 14; ++j) {
            const double d = std::ldexp(1.0, -j);
            if (d < s.reliable_delta()) continue;
            CHECK(neighborhood_measure(s, d) >= gap_lower_bound(seq, d));
        }
    }
}

TEST_CASE("portion exponent fits") {
    std::vector<double> grid;
    for (int j = 4; j <= 10; ++j) grid.push_back(std::ldexp(1.0, -j));

    // dyadic points in [0, 1]: the measure grows like delta log(1/delta), and on
    // this grid the log factor pulls the fitted exponent to about 0.81
    std::vector<double> in_unit{0.0};
    for (int k = -12; k <= 0; ++k) in_unit.push_back(std::ldexp(1.0, k));
    std::vector<double> lx, ly;
    for (double d : grid) {
        lx.push_back(std::log(d));
        ly.push_back(std::log(union_measure(in_unit, d)));
        CHECK(union_measure(in_unit, d) / (d * std::log2(1 / d)) >= 1.0);
    }
    const auto dy = theorem2_fit(dyadic_set(-12, 0), {0, 1}, grid);
    CHECK(dy.fit.exponent == doctest::Approx(ols_slope(lx, ly)).epsilon(1e-9));
    CHECK(dy.fit.exponent < 1.0);
    CHECK(dy.fit.points_used() == grid.size());

    const auto two = theorem2_fit(exact_points({0, 1}), {0, 1}, grid);
    CHECK(two.fit.exponent == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(two.consistent);

    std::vector<double> fine;
    for (int j = 2; j <= 10; ++j) fine.push_back(std::pow(3.0, -j));
    const auto c = theorem2_fit(cantor_triadic(12), {0, 1}, fine);
    CHECK(c.fit.exponent == doctest::Approx(1.0 - std::log(2.0) / std::log(3.0)).epsilon(0.03));
    CHECK(c.bound_exponent == doctest::Approx(0.5));

    CHECK_THROWS_AS(theorem2_fit(cantor_triadic(2), {0, 1}, grid), ReliabilityError);
    CHECK_THROWS_AS(theorem2_fit(cantor_triadic(8), {0, 1}, grid, 2.5), ValidationError);
}
