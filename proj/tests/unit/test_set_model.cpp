#include "lplab/errors.hpp"
#include "lplab/set_model.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace lplab;

namespace {

void check_layout(const GapSet& s) {
    const auto& g = s.gaps();
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(g[i].lo < g[i].hi);
        CHECK(g[i].lo >= s.window().lo);
        CHECK(g[i].hi <= s.window().hi);
        if (i > 0) CHECK(g[i - 1].hi <= g[i].lo);
    }
}

std::vector<double> point_list(const GapSet& s) {
    std::vector<double> out;
    for (const auto& c : s.components()) {
        REQUIRE(c.degenerate());
        out.push_back(c.lo);
    }
    return out;
}

// Tree membership by bit pattern: k lies in the left subtree of the root iff
// the bit below its leading one is zero.
bool in_left_subtree(std::size_t k) {
    if (k < 2) return false;
    int top = 63 - __builtin_clzll(k);
    return ((k >> (top - 1)) & 1u) == 0;
}

} // namespace

TEST_CASE("from_gaps removes the middle third") {
    const auto s = GapSet::from_gaps({0, 1}, {{1.0 / 3, 2.0 / 3}});
    const auto c = s.components();
    REQUIRE(c.size() == 2);
    CHECK(c[0] == Interval{0, 1.0 / 3});
    CHECK(c[1] == Interval{2.0 / 3, 1});
    CHECK(s.residual() == doctest::Approx(2.0 / 3).epsilon(1e-15));
}

TEST_CASE("from_gaps without gaps is the window") {
    const auto s = GapSet::from_gaps({0, 1}, {});
    REQUIRE(s.components().size() == 1);
    CHECK(s.components()[0] == Interval{0, 1});
    CHECK(s.residual() == 1.0);
}

TEST_CASE("from_gaps rejects bad layouts") {
    CHECK_THROWS_AS(GapSet::from_gaps({0, 1}, {{0.2, 0.4}, {0.3, 0.5}}), ValidationError);
    CHECK_THROWS_AS(GapSet::from_gaps({0, 1}, {{0.5, 1.5}}), ValidationError);
    CHECK_THROWS_AS(GapSet::from_gaps({0, 1}, {{0.5, 0.5}}), ValidationError);
    CHECK_THROWS_AS(GapSet::from_gaps({1, 0}, {}), ValidationError);
    CHECK_THROWS_AS(GapSet::from_gaps({0, INFINITY}, {}), ValidationError);
    try {
        GapSet::from_gaps({0, 1}, {{0.2, 0.4}, {0.3, 0.5}});
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("overlap") != std::string::npos);
    }
}

TEST_CASE("from_gaps sorts its input") {
    const auto s = GapSet::from_gaps({0, 10}, {{6, 7}, {1, 2}, {3, 4}});
    check_layout(s);
    CHECK(s.gaps().front() == Interval{1, 2});
    CHECK(s.gap_containing(3.5) == 1);
    CHECK(s.gap_containing(3.0) == -1);
    CHECK(s.contains(3.0));
    CHECK_FALSE(s.contains(6.5));
    CHECK_FALSE(s.contains(11.0));
}

TEST_CASE("dyadic_set enumerates +-2^k and 0") {
    const auto s = dyadic_set(0, 2);
    CHECK(point_list(s) == std::vector<double>{-4, -2, -1, 0, 1, 2, 4});
    CHECK(s.gaps().size() == 6);
    CHECK(s.window() == Interval{-4, 4});
    CHECK(point_list(dyadic_set(0, 0)) == std::vector<double>{-1, 0, 1});
    CHECK_THROWS_AS(dyadic_set(3, 1), ValidationError);
    check_layout(dyadic_set(-12, 12));
}

TEST_CASE("cantor_triadic") {
    CHECK(cantor_triadic(0).components() == std::vector<Interval>{{0, 1}});
    const auto c1 = cantor_triadic(1).components();
    REQUIRE(c1.size() == 2);
    CHECK(c1[0] == Interval{0, 1.0 / 3});
    CHECK(c1[1] == Interval{2.0 / 3, 1});
    const auto c2 = cantor_triadic(2).components();
    REQUIRE(c2.size() == 4);
    for (const auto& c : c2) CHECK(c.length() == doctest::Approx(1.0 / 9).epsilon(1e-14));
    for (int d = 0; d <= 12; ++d) {
        const auto s = cantor_triadic(d);
        check_layout(s);
        CHECK(s.component_count() == (std::size_t(1) << d));
        CHECK(s.residual() == doctest::Approx(std::pow(2.0 / 3, d)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(cantor_triadic(-1), ValidationError);
    CHECK_THROWS_AS(cantor_triadic(21), ValidationError);
}

TEST_CASE("sum_set enumerates subset sums") {
    CHECK(point_list(sum_set({1})) == std::vector<double>{0, 1});
    const auto p = point_list(sum_set({1, 1.0 / 3}));
    REQUIRE(p.size() == 4);
    CHECK(p[0] == 0);
    CHECK(p[1] == doctest::Approx(1.0 / 3));
    CHECK(p[2] == 1);
    CHECK(p[3] == doctest::Approx(4.0 / 3));
    CHECK_THROWS_AS(sum_set({1, 0.6}), ValidationError);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.05, 0.45);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> l{1.0};
        const int K = 1 + int(rng() % 10);
        while (int(l.size()) < K) l.push_back(l.back() * u(rng));
        const auto pts = point_list(sum_set(l));
        CHECK(pts.size() == (std::size_t(1) << K));
        CHECK(std::is_sorted(pts.begin(), pts.end()));
        CHECK(std::adjacent_find(pts.begin(), pts.end()) == pts.end());
    }
}

TEST_CASE("GapSequence families") {
    const auto g = GapSequence::normalized_geometric(std::log(2.0));
    CHECK(g.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.delta(1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(g.delta(3) == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(g.strictly_decreasing());
    CHECK(g.max_ratio() == doctest::Approx(0.5));
    CHECK(g.ratio_condition(0.5 + 1e-12));
    CHECK_FALSE(g.ratio_condition(0.4));
    for (double d : g.deltas()) CHECK(d > 0.0);

    const auto s = GapSequence::normalized_stretched([](double k) { return 0.5 + 0.01 * k; });
    CHECK(s.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(GapSequence::geometric(-1, 1), ValidationError);
    CHECK_THROWS_AS(GapSequence::explicit_terms({0.5, -0.1}), ValidationError);
}

TEST_CASE("generated_set depth 0 and depth 1") {
    const auto seq = GapSequence::normalized_geometric(std::log(2.0));
    const auto s0 = generated_set(seq, 0);
    CHECK(s0.components() == std::vector<Interval>{{0, 1}});

    // independent oracle: sum the left subtree of the root by bit pattern
    double left = 0.0;
    for (std::size_t k = 2; k <= seq.size(); ++k) {
        if (in_left_subtree(k)) left += seq.delta(k);
    }
    const auto s1 = generated_set(seq, 1);
    REQUIRE(s1.gaps().size() == 1);
    CHECK(s1.gaps()[0].lo == doctest::Approx(left).epsilon(1e-13));
    CHECK(s1.gaps()[0].length() == doctest::Approx(0.5).epsilon(1e-13));

    CHECK_THROWS_AS(generated_set(GapSequence::explicit_terms({0.5, 0.6}), 1), ValidationError);
    CHECK_THROWS_AS(generated_set(GapSequence::explicit_terms({0.25, 0.75}), 1), ValidationError);
}

TEST_CASE("generated_set places delta_1 .. delta_{2^d - 1} and conserves length") {
    const auto seq = GapSequence::normalized_geometric(0.9);
    for (int depth = 1; depth <= 10; ++depth) {
        const auto s = generated_set(seq, depth);
        check_layout(s);
        std::vector<double> lengths;
        double placed = 0.0;
        for (const auto& g : s.gaps()) {
            lengths.push_back(g.length());
            placed += g.length();
        }
        CHECK(placed + s.residual() == doctest::Approx(s.window().length()).epsilon(1e-12));
        std::sort(lengths.rbegin(), lengths.rend());
        // nodes past the stored (underflow-truncated) sequence are never placed
        const std::size_t nodes = std::min((std::size_t(1) << depth) - 1, seq.size());
        const std::size_t expected = nodes - s.dropped_gaps();
        REQUIRE(lengths.size() == expected);
        for (std::size_t k = 0; k < std::min<std::size_t>(expected, 12); ++k) {
            CHECK(lengths[k] == doctest::Approx(seq.delta(k + 1)).epsilon(1e-9));
        }
    }
}

TEST_CASE("PsiSpec validation and monotone replacement") {
    CHECK_THROWS_AS(PsiSpec::power(1.0).validate(), ValidationError);
    CHECK_THROWS_AS(PsiSpec::powerlog(-1.0).validate(), ValidationError);
    CHECK(PsiSpec::power(0.5).ratio_monotone());
    const auto tab = PsiSpec::tabulated({{1e-6, 1e-4}, {1e-3, 1e-3}, {1e-2, 1e-1}});
    CHECK_NOTHROW(tab.validate());
    CHECK_FALSE(tab.ratio_monotone());
    // replacement uses the running infimum of psi(s)/s
    CHECK(tab.monotone_log_ratio(std::log(1e-2)) <= tab.log_ratio(std::log(1e-2)));
    CHECK(tab.monotone_log_ratio(std::log(1e-2)) == doctest::Approx(tab.log_ratio(std::log(1e-3))));
}

TEST_CASE("triadic exponents for psi = sqrt") {
    const auto psi = PsiSpec::power(0.5);
    const auto n = triadic_exponents(psi, 12);
    int prev = 0;
    for (int k = 1; k <= 12; ++k) {
        // smallest integer with 3^{n/2} >= 6 * 2^k, increased past the previous one
        int m = 1;
        while (std::pow(3.0, m / 2.0) < 6.0 * std::pow(2.0, k)) ++m;
        m = std::max(m, prev + 1);
        CHECK(n[std::size_t(k - 1)] == m);
        prev = m;
    }
}

TEST_CASE("gauge-driven chain set is ordered and certified") {
    CHECK_THROWS_AS(theorem3_set(PsiSpec::power(0.5), 0), ValidationError);
    const auto t = theorem3_set(PsiSpec::power(0.5), 3);
    CHECK_FALSE(t.psi_replaced);
    REQUIRE(t.chains.size() == 3);
    double previous_beta = 0.0;
    for (const auto& c : t.chains) {
        CHECK(c.exact_valid);
        CHECK(c.resolved);
        CHECK(c.chain.order() == c.order);
        const auto pts = c.chain.points();
        CHECK(pts.size() == (std::size_t(1) << c.order));
        CHECK(pts.front() >= c.alpha);
        CHECK(pts.back() <= c.beta * (1 + 1e-15));
        CHECK(c.alpha < c.beta);
        CHECK(previous_beta < c.alpha);
        previous_beta = c.beta;
        for (double x : pts) CHECK(t.set.contains(x));
    }
    CHECK(t.limit > previous_beta);
    CHECK(t.set.contains(t.limit));
    check_layout(t.set);

    const auto big = theorem3_set(PsiSpec::powerlog(2.0), 4);
    for (const auto& c : big.chains) CHECK(c.exact_valid);
    CHECK(big.set.contains(big.limit));
}
