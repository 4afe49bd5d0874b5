#include "lplab/combinatorics.hpp"

#include "lplab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace lplab {

// ---------------------------------------------------------------- splitting

SplittingCertificate splits(std::span<const double> points, const GapSet& set) {
    SplittingCertificate cert;
    cert.points.assign(points.begin(), points.end());
    std::sort(cert.points.begin(), cert.points.end());
    cert.gap_index.reserve(cert.points.size());
    cert.valid = true;

    long previous_gap = -2;
    for (std::size_t i = 0; i < cert.points.size(); ++i) {
        const double x = cert.points[i];
        const long g = set.gap_containing(x);
        cert.gap_index.push_back(g);
        if (!cert.valid) continue;
        if (g < 0) {
            cert.valid = false;
            cert.first_offender = long(i);
            cert.reason = set.window().contains_closed(x) ? "point lies in the set"
                                                          : "point lies outside the window";
        } else if (g == previous_gap) {
            // sorted points: a repeated gap shows up on consecutive entries
            cert.valid = false;
            cert.first_offender = long(i);
            cert.reason = "two points share gap " + std::to_string(g);
        }
        previous_gap = g;
    }
    return cert;
}

void APSpec::validate() const {
    if (!std::isfinite(a)) throw ValidationError("must be finite", "ap.a");
    if (d == 0.0 || !std::isfinite(d)) throw ValidationError("difference must be nonzero", "ap.d");
    if (N < 1) throw ValidationError("length must be >= 1", "ap.N");
}

std::vector<double> APSpec::points() const {
    validate();
    std::vector<double> out;
    out.reserve(std::size_t(N));
    for (long k = 1; k <= N; ++k) out.push_back(a + double(k) * d);
    return out;
}

SplittingSubset max_splitting_subset(const GapSet& set, const APSpec& ap) {
    auto pts = ap.points();
    std::sort(pts.begin(), pts.end());
    SplittingSubset out;
    long last_gap = -1;
    for (double x : pts) {
        const long g = set.gap_containing(x);
        if (g < 0 || g == last_gap) continue;
        out.subset.push_back(x);
        out.gaps.push_back(g);
        last_gap = g;
    }
    out.nu = out.gaps.size();
    return out;
}

// ---------------------------------------------------------------- shifts

double lemma2_shift(std::span<const double> points, const GapSet& set, double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw ValidationError("must be positive", "delta");
    bool clear = true;
    for (double t : points) {
        if (set.contains(t)) {
            clear = false;
            break;
        }
    }
    if (clear) return 0.0;

    const auto comps = set.components();
    std::vector<Interval> blocked;
    for (double t : points) {
        // components meeting [t - delta, t + delta]
        auto it = std::lower_bound(comps.begin(), comps.end(), t - delta,
                                   [](const Interval& c, double v) { return c.hi < v; });
        for (; it != comps.end() && it->lo <= t + delta; ++it) {
            Interval shifted{it->lo - t, it->hi - t};
            Interval clipped;
            if (intersect(shifted, {-delta, delta}, clipped)) blocked.push_back(clipped);
        }
    }
    blocked = merge_intervals(std::move(blocked));

    // open feasible pieces of (-delta, delta) between closed blocked pieces
    std::vector<Interval> feasible;
    double cursor = -delta;
    for (const auto& b : blocked) {
        if (b.lo > cursor) feasible.push_back({cursor, b.lo});
        cursor = std::max(cursor, b.hi);
    }
    if (cursor < delta) feasible.push_back({cursor, delta});

    if (feasible.empty()) {
        double covered = 0.0;
        for (const auto& b : blocked) covered += b.length();
        throw InfeasibleShift(delta, covered);
    }
    double best = feasible.front().midpoint();
    for (const auto& f : feasible) {
        const double m = f.midpoint();
        if (std::fabs(m) < std::fabs(best)) best = m;
    }
    return best;
}

// ---------------------------------------------------------------- chains

namespace {

bool member(const std::vector<double>& sorted, double x, double eps) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), x - eps);
    return it != sorted.end() && *it <= x + eps;
}

bool chain_inside(const std::vector<double>& sorted, double base, const std::vector<double>& lengths,
                  double eps) {
    Chain c{base, lengths};
    if (!c.distinct(eps)) return false;
    for (double x : c.points()) {
        if (!member(sorted, x, eps)) return false;
    }
    return true;
}

std::optional<Chain> exact_search(const std::vector<double>& pts, int n, double eps) {
    const std::size_t m = pts.size();
    std::vector<std::size_t> idx(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < m; ++i) {
        // choose n increasing partner indices j_1 < ... < j_n after i
        if (m - i - 1 < std::size_t(n)) break;
        for (int t = 0; t < n; ++t) idx[std::size_t(t)] = i + 1 + std::size_t(t);
        for (;;) {
            std::vector<double> lengths;
            lengths.reserve(std::size_t(n));
            for (std::size_t j : idx) lengths.push_back(pts[j] - pts[i]);
            if (chain_inside(pts, pts[i], lengths, eps)) return Chain{pts[i], lengths};
            // next combination
            int t = n - 1;
            while (t >= 0 && idx[std::size_t(t)] == m - std::size_t(n - t)) --t;
            if (t < 0) break;
            ++idx[std::size_t(t)];
            for (int u = t + 1; u < n; ++u) idx[std::size_t(u)] = idx[std::size_t(u - 1)] + 1;
        }
    }
    return std::nullopt;
}

std::optional<Chain> greedy_search(const std::vector<double>& pts, int n, double eps) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double base = pts[i];
        std::vector<double> lengths;
        for (int step = 0; step < n; ++step) {
            bool extended = false;
            for (std::size_t j = i + 1; j < pts.size() && !extended; ++j) {
                const double l = pts[j] - base;
                auto trial = lengths;
                trial.push_back(l);
                if (chain_inside(pts, base, trial, eps)) {
                    lengths = std::move(trial);
                    extended = true;
                }
            }
            if (!extended) break;
        }
        if (int(lengths.size()) == n) return Chain{base, lengths};
    }
    return std::nullopt;
}

} // namespace

ChainSearchResult find_chain(std::span<const double> points, int n, ChainSearch mode, double eps) {
    if (n < 1) throw ValidationError("must be >= 1", "n");
    if (!(eps >= 0.0)) throw ValidationError("must be >= 0", "eps");
    std::vector<double> pts(points.begin(), points.end());
    for (double x : pts) {
        if (!std::isfinite(x)) throw ValidationError("non-finite point", "points");
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    ChainSearchResult out;
    if (mode == ChainSearch::Exact) {
        if (n > 3 || pts.size() > 64) {
            throw ValidationError("exact chain search is limited to n <= 3 and 64 points; "
                                  "request heuristic mode",
                                  "n");
        }
        out.exhaustive = true;
        out.chain = exact_search(pts, n, eps);
    } else {
        if (n > 20) throw ValidationError("chain order above 20", "n");
        out.exhaustive = false;
        out.chain = greedy_search(pts, n, eps);
    }
    return out;
}

Lemma5Result lemma5_sequence(const std::vector<double>& lengths, int n_max) {
    if (n_max < 1) throw ValidationError("must be >= 1", "n_max");
    const std::size_t needed = std::size_t(n_max) * std::size_t(n_max) + std::size_t(n_max);
    if (lengths.size() < needed) {
        throw ValidationError("need at least " + std::to_string(needed) + " lengths, got " +
                                  std::to_string(lengths.size()),
                              "lengths");
    }
    check_half_decay(lengths);

    Lemma5Result out;
    for (int n = 1; n <= n_max; ++n) {
        const std::size_t start = std::size_t(n) * std::size_t(n);
        double alpha = 0.0;
        for (std::size_t k = 0; k < start; ++k) alpha += lengths[k];
        Chain c;
        c.base = alpha;
        double beta = alpha;
        for (std::size_t k = start; k < start + std::size_t(n); ++k) {
            c.lengths.push_back(lengths[k]);
            beta += lengths[k];
        }
        for (double x : c.points()) out.points.push_back(x);
        out.spans.push_back({alpha, beta});
        out.chains.push_back(std::move(c));
    }
    std::sort(out.points.begin(), out.points.end());
    return out;
}

ChainSplit chain_split_shift(const Chain& chain, const GapSet& set, double delta0, double floor) {
    if (!(delta0 > 0.0)) throw ValidationError("must be positive", "delta0");
    if (!(floor > 0.0) || floor > delta0) throw ValidationError("must lie in (0, delta0]", "floor");
    const auto pts = chain.points();

    ChainSplit out;
    out.certificate = splits(pts, set);
    if (out.certificate.valid) return out;

    SplittingCertificate last = out.certificate;
    for (double delta = delta0; delta >= floor; delta *= 0.5) {
        double xi = 0.0;
        try {
            xi = lemma2_shift(pts, set, delta);
        } catch (const InfeasibleShift&) {
            break;  // a smaller radius only shrinks the feasible set
        }
        std::vector<double> moved(pts);
        for (double& x : moved) x += xi;
        auto cert = splits(moved, set);
        if (cert.valid) {
            out.shift = xi;
            out.delta = delta;
            out.certificate = std::move(cert);
            return out;
        }
        last = std::move(cert);
    }

    long blocking = -1;
    if (last.first_offender >= 0) blocking = last.gap_index[std::size_t(last.first_offender)];
    throw ChainSplitFailure("no splitting shift found down to radius " + std::to_string(floor) +
                                (blocking >= 0 ? " (points share gap " + std::to_string(blocking) + ")"
                                               : " (a point stays in the set)"),
                            blocking);
}

} // namespace lplab
