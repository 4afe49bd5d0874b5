#include "lplab/combinatorics.hpp"
#include "lplab/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

using namespace lplab;

namespace {

// All n-chains by brute force: every base in the set and every n-subset of
// positive differences as lengths.
bool brute_has_chain(const std::vector<double>& pts, int n) {
    std::set<double> s(pts.begin(), pts.end());
    std::vector<double> sorted(s.begin(), s.end());
    for (double base : sorted) {
        std::vector<double> diffs;
        for (double x : sorted) {
            if (x > base) diffs.push_back(x - base);
        }
        const std::size_t m = diffs.size();
        if (m < std::size_t(n)) continue;
        // enumerate subsets of size n with a bitmask
        for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << m); ++mask) {
            if (__builtin_popcountll(mask) != n) continue;
            std::vector<double> lengths;
            for (std::size_t j = 0; j < m; ++j) {
                if (mask >> j & 1u) lengths.push_back(diffs[j]);
            }
            std::set<double> sums;
            bool inside = true;
            for (std::uint64_t e = 0; e < (std::uint64_t(1) << n) && inside; ++e) {
                double x = base;
                for (int j = 0; j < n; ++j) {
                    if (e >> j & 1u) x += lengths[std::size_t(j)];
                }
                sums.insert(x);
                inside = s.count(x) > 0;
            }
            if (inside && sums.size() == (std::size_t(1) << n)) return true;
        }
    }
    return false;
}

// nu by point-by-gap enumeration: count distinct gaps hit by AP points.
std::size_t brute_nu(const GapSet& s, const APSpec& ap) {
    std::set<long> hit;
    for (long k = 1; k <= ap.N; ++k) {
        const double x = ap.a + double(k) * ap.d;
        for (std::size_t g = 0; g < s.gaps().size(); ++g) {
            if (s.gaps()[g].contains_open(x)) hit.insert(long(g));
        }
    }
    return hit.size();
}

} // namespace

TEST_CASE("splitting certificates") {
    const auto c1 = cantor_triadic(1);
    CHECK(splits(std::vector<double>{0.5}, c1).valid);
    const auto same = splits(std::vector<double>{0.4, 0.5}, c1);
    CHECK_FALSE(same.valid);
    CHECK(same.first_offender == 1);
    const auto in_set = splits(std::vector<double>{0.0}, dyadic_set(0, 4));
    CHECK_FALSE(in_set.valid);
    CHECK(in_set.reason.find("in the set") != std::string::npos);
    const auto unsorted = splits(std::vector<double>{0.9, 0.5}, cantor_triadic(2));
    CHECK(unsorted.points == std::vector<double>{0.5, 0.9});
}

TEST_CASE("max splitting subset examples") {
    const auto d3 = dyadic_set(0, 3);
    const auto r = max_splitting_subset(d3, {0.5, 1.0, 8});
    CHECK(r.nu == 3);
    CHECK(r.subset == std::vector<double>{1.5, 2.5, 4.5});
    CHECK(splits(r.subset, d3).valid);

    CHECK(max_splitting_subset(cantor_triadic(1), {0.0, 0.5, 1}).nu == 1);
    CHECK(max_splitting_subset(cantor_triadic(1), {-0.1, 0.1, 2}).nu == 0);
    CHECK_THROWS_AS(max_splitting_subset(d3, {0.5, 0.0, 4}), ValidationError);
    CHECK_THROWS_AS(max_splitting_subset(d3, {0.5, 1.0, 0}), ValidationError);
}

TEST_CASE("max splitting subset against enumeration") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    const std::vector<GapSet> sets{dyadic_set(0, 8), cantor_triadic(5), sum_set({1, 0.3, 0.1, 0.02})};
    for (const auto& s : sets) {
        for (int t = 0; t < 30; ++t) {
            const double w = s.window().length();
            const APSpec ap{s.window().lo + u(rng) * 0.1 * w, (0.001 + u(rng) * 0.05) * w * (t % 2 ? 1 : -1) ,
                            1 + long(rng() % 60)};
            const auto r = max_splitting_subset(s, ap);
            CHECK(r.nu == brute_nu(s, ap));
            CHECK(r.nu <= std::min<std::size_t>(std::size_t(ap.N), s.gaps().size()));
            CHECK(splits(r.subset, s).valid);
        }
    }
}

TEST_CASE("dyadic splitting grows logarithmically") {
    const auto d = dyadic_set(0, 12);
    for (int m = 4; m <= 12; ++m) {
        const APSpec ap{0.0, 1.0, 1L << m};
        const auto r = max_splitting_subset(d, ap);
        CHECK(double(r.nu) <= 3.0 * m);
        if (m <= 8) CHECK(r.nu == brute_nu(d, ap));
    }
}

TEST_CASE("shift search") {
    const auto c1 = cantor_triadic(1);
    CHECK(lemma2_shift(std::vector<double>{1.0 / 3}, c1, 0.1) == doctest::Approx(0.05));
    CHECK(lemma2_shift(std::vector<double>{0.5}, c1, 0.1) == 0.0);
    const GapSet full = GapSet::from_gaps({0, 1}, {});
    CHECK_THROWS_AS(lemma2_shift(std::vector<double>{0.5}, full, 0.1), InfeasibleShift);
    try {
        lemma2_shift(std::vector<double>{0.5}, full, 0.1);
    } catch (const InfeasibleShift& e) {
        CHECK(e.covered() == doctest::Approx(0.2));
    }
    CHECK_THROWS_AS(lemma2_shift(std::vector<double>{0.5}, c1, 0.0), ValidationError);

    // the returned shift really clears every component
    const auto c4 = cantor_triadic(4);
    const std::vector<double> F{0.1, 0.3, 0.7};
    const double xi = lemma2_shift(F, c4, 0.05);
    CHECK(std::fabs(xi) < 0.05);
    for (double x : F) CHECK_FALSE(c4.contains(x + xi));
}

TEST_CASE("chain search examples") {
    const auto r = find_chain(std::vector<double>{0, 1, 2, 3}, 2);
    REQUIRE(r.chain);
    CHECK(r.chain->base == 0);
    CHECK(r.chain->lengths == std::vector<double>{1, 2});
    CHECK(r.exhaustive);
    CHECK_FALSE(find_chain(std::vector<double>{0, 1, 2}, 2).chain);

    // an AP of 2^n terms contains the chain with lengths d, 2d, 4d
    std::vector<double> ap;
    const double a = 0.25, d = 0.5;
    for (int k = 1; k <= 8; ++k) ap.push_back(a + k * d);
    const auto c3 = find_chain(ap, 3);
    REQUIRE(c3.chain);
    CHECK(c3.chain->base == a + d);
    auto lengths = c3.chain->lengths;
    std::sort(lengths.begin(), lengths.end());
    CHECK(lengths == std::vector<double>{d, 2 * d, 4 * d});

    std::vector<double> many(65);
    for (std::size_t i = 0; i < many.size(); ++i) many[i] = double(i);
    CHECK_THROWS_AS(find_chain(many, 2), ValidationError);
    CHECK_THROWS_AS(find_chain(ap, 4), ValidationError);
    const auto h = find_chain(many, 4, ChainSearch::Heuristic);
    CHECK_FALSE(h.exhaustive);
    REQUIRE(h.chain);
    CHECK(h.chain->distinct());
}

TEST_CASE("exact chain search agrees with brute force") {
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 60; ++t) {
        const std::size_t size = 1 + rng() % 12;
        std::set<double> pts;
        while (pts.size() < size) pts.insert(double(rng() % 20));
        const std::vector<double> v(pts.begin(), pts.end());
        for (int n = 1; n <= 3; ++n) {
            CHECK(find_chain(v, n).chain.has_value() == brute_has_chain(v, n));
        }
    }
}

TEST_CASE("nested subset-sum chains are disjoint and ordered") {
    std::vector<double> l;
    for (int k = 1; k <= 20; ++k) l.push_back(std::pow(3.0, -k));
    const auto one = lemma5_sequence(l, 1);
    REQUIRE(one.chains.size() == 1);
    const auto p = one.chains[0].points();
    CHECK(p[0] == doctest::Approx(1.0 / 3));
    CHECK(p[1] == doctest::Approx(4.0 / 9));

    const auto three = lemma5_sequence(l, 3);
    for (std::size_t i = 0; i < three.spans.size(); ++i) {
        CHECK(three.spans[i].lo < three.spans[i].hi);
        if (i > 0) CHECK(three.spans[i - 1].hi < three.spans[i].lo);
        const auto& c = three.chains[i];
        for (double x : c.points()) {
            CHECK(x >= three.spans[i].lo);
            CHECK(x <= three.spans[i].hi);
        }
        // each F_n is found as an n-chain inside its own points
        const auto pts = c.points();
        const auto found = find_chain(pts, int(i + 1));
        CHECK(found.chain.has_value());
    }
    CHECK_THROWS_AS(lemma5_sequence({1, 0.6, 0.2, 0.05}, 1), ValidationError);
    CHECK_THROWS_AS(lemma5_sequence(l, 5), ValidationError);
}

TEST_CASE("chain split shift") {
    const auto c1 = cantor_triadic(1);
    const Chain blocked{1.0 / 3, {1.0 / 9}};
    CHECK_THROWS_AS(chain_split_shift(blocked, c1, 0.1), ChainSplitFailure);
    try {
        chain_split_shift(blocked, c1, 0.1);
    } catch (const ChainSplitFailure& e) {
        CHECK(e.blocking_gap() == 0);
    }

    const Chain spread{0.2, {0.6}};
    const auto c2 = cantor_triadic(2);
    const auto ok = chain_split_shift(spread, c2, 0.1);
    CHECK(ok.certificate.valid);
    CHECK(ok.shift == 0.0);

    const auto c3 = cantor_triadic(3);
    const Chain touching{1.0 / 9, {2.0 / 3}};
    const auto moved = chain_split_shift(touching, c3, 0.05);
    CHECK(moved.certificate.valid);
    CHECK(std::fabs(moved.shift) < moved.delta);
    CHECK(moved.shift != 0.0);
}
