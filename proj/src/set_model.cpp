#include "lplab/set_model.hpp"

#include "lplab/errors.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace lplab {

namespace {

bool finite(double x) { return std::isfinite(x); }

std::string num(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

std::string span_text(const Interval& iv) { return "(" + num(iv.lo) + ", " + num(iv.hi) + ")"; }

} // namespace

// ---------------------------------------------------------------- GapSet

GapSet GapSet::from_gaps(Interval window, std::vector<Interval> gaps, int depth, GapSetMeta meta) {
    if (!finite(window.lo) || !finite(window.hi)) throw ValidationError("non-finite window", "window");
    if (window.hi < window.lo) throw ValidationError("window has hi < lo", "window");
    if (window.degenerate() && !gaps.empty()) {
        throw ValidationError("a zero-length window cannot hold gaps", "window");
    }
    for (const auto& g : gaps) {
        if (!finite(g.lo) || !finite(g.hi)) throw ValidationError("non-finite gap endpoint", "gaps");
        if (!(g.lo < g.hi)) throw ValidationError("zero-length gap " + span_text(g), "gaps");
        if (g.lo < window.lo || g.hi > window.hi) {
            throw ValidationError("gap " + span_text(g) + " outside window", "gaps");
        }
    }
    std::sort(gaps.begin(), gaps.end(),
              [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    for (std::size_t i = 1; i < gaps.size(); ++i) {
        if (gaps[i].lo < gaps[i - 1].hi) {
            throw ValidationError("overlapping gaps " + span_text(gaps[i - 1]) + " and " +
                                      span_text(gaps[i]),
                                  "gaps");
        }
    }

    GapSet s;
    s.window_ = window;
    s.gaps_ = std::move(gaps);
    s.depth_ = depth;
    s.meta_ = std::move(meta);

    double residual = 0.0;
    double largest = 0.0;
    for (const auto& c : s.components()) {
        residual += c.length();
        largest = std::max(largest, c.length());
    }
    s.residual_ = residual;
    if (s.meta_.resolution < 0.0) s.meta_.resolution = largest;
    return s;
}

GapSet GapSet::from_points(std::vector<double> points, int depth, GapSetMeta meta) {
    if (points.empty()) throw ValidationError("empty point set", "points");
    for (double x : points) {
        if (!finite(x)) throw ValidationError("non-finite point", "points");
    }
    std::sort(points.begin(), points.end());
    std::vector<Interval> gaps;
    gaps.reserve(points.size() - 1);
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i] == points[i - 1]) throw ValidationError("duplicate point " + num(points[i]), "points");
        gaps.push_back({points[i - 1], points[i]});
    }
    if (meta.resolution < 0.0) meta.resolution = 0.0;
    return from_gaps({points.front(), points.back()}, std::move(gaps), depth, std::move(meta));
}

std::vector<Interval> GapSet::components() const {
    std::vector<Interval> out;
    out.reserve(gaps_.size() + 1);
    double cursor = window_.lo;
    for (const auto& g : gaps_) {
        out.push_back({cursor, g.lo});
        cursor = g.hi;
    }
    out.push_back({cursor, window_.hi});
    return out;
}

long GapSet::gap_containing(double x) const {
    auto it = std::upper_bound(gaps_.begin(), gaps_.end(), x,
                               [](double v, const Interval& g) { return v < g.lo; });
    if (it == gaps_.begin()) return -1;
    --it;
    return it->contains_open(x) ? long(it - gaps_.begin()) : -1;
}

bool GapSet::contains(double x) const {
    return window_.contains_closed(x) && gap_containing(x) < 0;
}

// ---------------------------------------------------------------- GapSequence

const char* to_string(SequenceFamily family) {
    switch (family) {
    case SequenceFamily::Explicit: return "explicit";
    case SequenceFamily::Geometric: return "geometric";
    case SequenceFamily::Stretched: return "stretched";
    case SequenceFamily::Custom: return "custom";
    }
    return "custom";
}

GapSequence GapSequence::explicit_terms(std::vector<double> deltas) {
    if (deltas.empty()) throw ValidationError("empty gap sequence", "deltas");
    for (double d : deltas) {
        if (!finite(d) || !(d > 0.0)) throw ValidationError("gap lengths must be positive", "deltas");
    }
    GapSequence s;
    s.deltas_ = std::move(deltas);
    s.family_ = SequenceFamily::Explicit;
    return s;
}

GapSequence GapSequence::geometric(double a, double b, std::size_t max_terms) {
    if (!(a > 0.0) || !finite(a)) throw ValidationError("scale must be positive", "a");
    if (!(b > 0.0) || !finite(b)) throw ValidationError("rate must be positive", "b");
    GapSequence s;
    s.family_ = SequenceFamily::Geometric;
    s.a_ = a;
    s.b_ = b;
    for (std::size_t k = 1; k <= max_terms; ++k) {
        const double term = a * std::exp(-double(k) * b);
        if (!(term >= DBL_MIN)) break;
        s.deltas_.push_back(term);
    }
    if (s.deltas_.empty()) throw ValidationError("sequence underflows immediately", "a");
    return s;
}

GapSequence GapSequence::normalized_geometric(double b, std::size_t max_terms) {
    if (!(b > 0.0) || !finite(b)) throw ValidationError("rate must be positive", "b");
    return geometric(std::expm1(b), b, max_terms);
}

GapSequence GapSequence::stretched(double a, std::function<double(double)> rate,
                                   std::size_t max_terms) {
    if (!(a > 0.0) || !finite(a)) throw ValidationError("scale must be positive", "a");
    if (!rate) throw ValidationError("missing rate function", "rate");
    GapSequence s;
    s.family_ = SequenceFamily::Stretched;
    s.a_ = a;
    s.b_ = rate(1.0);
    double previous_rate = 0.0;
    for (std::size_t k = 1; k <= max_terms; ++k) {
        const double x = double(k);
        const double r = rate(x);
        if (!finite(r) || r <= 0.0) throw ValidationError("rate must be positive and finite", "rate");
        if (r < previous_rate) throw ValidationError("rate must be non-decreasing", "rate");
        previous_rate = r;
        const double term = a * std::exp(-x * r);
        if (!(term >= DBL_MIN)) break;
        s.deltas_.push_back(term);
    }
    if (s.deltas_.empty()) throw ValidationError("sequence underflows immediately", "a");
    return s;
}

GapSequence GapSequence::normalized_stretched(std::function<double(double)> rate,
                                              std::size_t max_terms) {
    GapSequence unit = stretched(1.0, rate, max_terms);
    const double a = 1.0 / unit.sum();
    return stretched(a, std::move(rate), max_terms);
}

double GapSequence::sum() const {
    // smallest terms first
    double total = 0.0;
    for (auto it = deltas_.rbegin(); it != deltas_.rend(); ++it) total += *it;
    return total;
}

bool GapSequence::strictly_decreasing() const {
    for (std::size_t i = 1; i < deltas_.size(); ++i) {
        if (!(deltas_[i] < deltas_[i - 1])) return false;
    }
    return true;
}

double GapSequence::max_ratio() const {
    double worst = 0.0;
    for (std::size_t i = 1; i < deltas_.size(); ++i) worst = std::max(worst, deltas_[i] / deltas_[i - 1]);
    return worst;
}

// ---------------------------------------------------------------- Chain

std::vector<double> Chain::points() const {
    const std::size_t n = lengths.size();
    std::vector<double> out;
    out.reserve(std::size_t(1) << n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
        double x = base;
        for (std::size_t j = 0; j < n; ++j) {
            if (mask & (std::uint64_t(1) << j)) x += lengths[j];
        }
        out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool Chain::distinct(double eps) const {
    const auto pts = points();
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (!(pts[i] - pts[i - 1] > eps)) return false;
    }
    return true;
}

// ---------------------------------------------------------------- PsiSpec

PsiSpec PsiSpec::power(double alpha, double delta0) {
    PsiSpec p;
    p.kind = Kind::Power;
    p.parameter = alpha;
    p.delta0 = delta0;
    return p;
}

PsiSpec PsiSpec::powerlog(double beta, double delta0) {
    PsiSpec p;
    p.kind = Kind::PowerLog;
    p.parameter = beta;
    p.delta0 = delta0;
    return p;
}

PsiSpec PsiSpec::tabulated(std::vector<std::pair<double, double>> knots) {
    std::sort(knots.begin(), knots.end());
    PsiSpec p;
    p.kind = Kind::Tabulated;
    p.table = std::move(knots);
    p.delta0 = p.table.empty() ? 0.0 : p.table.back().first;
    return p;
}

void PsiSpec::validate() const {
    switch (kind) {
    case Kind::Power:
        if (!(parameter > 0.0 && parameter < 1.0)) {
            throw ValidationError("power psi needs 0 < alpha < 1 for psi(d)/d -> inf", "psi.alpha");
        }
        if (!(delta0 > 0.0) || !finite(delta0)) throw ValidationError("delta0 must be positive", "psi.delta0");
        break;
    case Kind::PowerLog:
        if (!(parameter > 0.0) || !finite(parameter)) {
            throw ValidationError("powerlog psi needs beta > 0 for psi(d)/d -> inf", "psi.beta");
        }
        if (!(delta0 > 0.0 && delta0 <= 1.0)) {
            throw ValidationError("powerlog psi needs 0 < delta0 <= 1", "psi.delta0");
        }
        break;
    case Kind::Tabulated: {
        if (table.size() < 2) throw ValidationError("tabulated psi needs at least two knots", "psi.table");
        for (std::size_t i = 0; i < table.size(); ++i) {
            const auto [d, v] = table[i];
            if (!(d > 0.0) || !(v > 0.0) || !finite(d) || !finite(v)) {
                throw ValidationError("tabulated knots must be positive", "psi.table");
            }
            if (i > 0 && !(d > table[i - 1].first)) {
                throw ValidationError("tabulated knots must have distinct deltas", "psi.table");
            }
        }
        const double x0 = std::log(table[0].first), x1 = std::log(table[1].first);
        const double slope = (std::log(table[1].second) - std::log(table[0].second)) / (x1 - x0);
        if (!(slope < 1.0)) {
            throw ValidationError("leftmost log-log slope must be < 1 for psi(d)/d -> inf", "psi.table");
        }
        break;
    }
    }
}

namespace {

double interp_log_psi(const std::vector<std::pair<double, double>>& table, double x) {
    // table is sorted; interpolate log psi linearly in log delta, extrapolating
    // with the end segments
    std::size_t i = 1;
    while (i + 1 < table.size() && x > std::log(table[i].first)) ++i;
    const double x0 = std::log(table[i - 1].first), x1 = std::log(table[i].first);
    const double y0 = std::log(table[i - 1].second), y1 = std::log(table[i].second);
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

} // namespace

double PsiSpec::log_ratio(double log_t) const {
    switch (kind) {
    case Kind::Power: return (parameter - 1.0) * log_t;
    case Kind::PowerLog: return parameter * std::log(-log_t);
    case Kind::Tabulated: return interp_log_psi(table, log_t) - log_t;
    }
    return 0.0;
}

double PsiSpec::monotone_log_ratio(double log_t) const {
    if (kind != Kind::Tabulated) return log_ratio(log_t);
    // piecewise linear in log t: the infimum over (0, t] sits at a knot or at t
    double best = log_ratio(log_t);
    for (const auto& [d, v] : table) {
        const double x = std::log(d);
        if (x > log_t) break;
        best = std::min(best, std::log(v) - x);
    }
    return best;
}

bool PsiSpec::ratio_monotone() const {
    if (kind != Kind::Tabulated) return true;
    for (std::size_t i = 1; i < table.size(); ++i) {
        const double r0 = std::log(table[i - 1].second) - std::log(table[i - 1].first);
        const double r1 = std::log(table[i].second) - std::log(table[i].first);
        if (r1 > r0) return false;
    }
    return true;
}

double PsiSpec::operator()(double delta) const {
    switch (kind) {
    case Kind::Power: return std::pow(delta, parameter);
    case Kind::PowerLog: return delta * std::pow(std::log(1.0 / delta), parameter);
    case Kind::Tabulated: return std::exp(interp_log_psi(table, std::log(delta)));
    }
    return 0.0;
}

std::string PsiSpec::describe() const {
    std::ostringstream os;
    switch (kind) {
    case Kind::Power: os << "power(alpha=" << parameter << ")"; break;
    case Kind::PowerLog: os << "powerlog(beta=" << parameter << ")"; break;
    case Kind::Tabulated: os << "tabulated(" << table.size() << " knots)"; break;
    }
    return os.str();
}

// ---------------------------------------------------------------- constructors

void check_half_decay(const std::vector<double>& lengths, const char* field) {
    for (std::size_t k = 0; k < lengths.size(); ++k) {
        if (!finite(lengths[k]) || !(lengths[k] > 0.0)) {
            throw ValidationError("lengths must be positive", field);
        }
        if (k > 0 && !(lengths[k] < 0.5 * lengths[k - 1])) {
            throw ValidationError("decay l_{k+1} < l_k/2 violated at k=" + std::to_string(k), field);
        }
    }
}

GapSet dyadic_set(int k_min, int k_max) {
    if (k_min > k_max) throw ValidationError("k_min > k_max", "k_min");
    if (k_min < -1000 || k_max > 1000) throw ValidationError("exponents outside [-1000, 1000]", "k_max");
    std::vector<double> pts;
    pts.reserve(2 * std::size_t(k_max - k_min + 1) + 1);
    pts.push_back(0.0);
    for (int k = k_min; k <= k_max; ++k) {
        pts.push_back(std::ldexp(1.0, k));
        pts.push_back(-std::ldexp(1.0, k));
    }
    GapSetMeta meta;
    meta.family = "dyadic";
    // the omitted points +-2^k, k < k_min, cluster within 2^k_min of 0
    meta.resolution = std::ldexp(1.0, k_min);
    return GapSet::from_points(std::move(pts), k_max - k_min, std::move(meta));
}

GapSet cantor_triadic(int depth, const SetLimits& limits) {
    if (depth < 0) throw ValidationError("must be >= 0", "depth");
    if (depth > limits.max_depth) {
        throw ValidationError("exceeds max depth " + std::to_string(limits.max_depth), "depth");
    }
    std::int64_t pow3 = 1;
    for (int i = 0; i < depth; ++i) pow3 *= 3;
    const double denom = double(pow3);

    const std::uint64_t count = std::uint64_t(1) << depth;
    std::vector<Interval> gaps;
    gaps.reserve(count - 1);
    std::int64_t prev_right = -1;
    for (std::uint64_t i = 0; i < count; ++i) {
        // base-3 digits in {0, 2}, most significant digit from the top bit
        std::int64_t left = 0;
        std::int64_t place = pow3 / 3;
        for (int bit = depth - 1; bit >= 0; --bit, place /= 3) {
            if (i & (std::uint64_t(1) << bit)) left += 2 * place;
        }
        if (prev_right >= 0) gaps.push_back({double(prev_right) / denom, double(left) / denom});
        prev_right = left + 1;
    }
    GapSetMeta meta;
    meta.family = "cantor";
    meta.resolution = 1.0 / denom;
    return GapSet::from_gaps({0.0, 1.0}, std::move(gaps), depth, std::move(meta));
}

GapSet sum_set(const std::vector<double>& lengths, const SetLimits& limits) {
    if (int(lengths.size()) > limits.max_terms) {
        throw ValidationError("more than " + std::to_string(limits.max_terms) + " terms", "lengths");
    }
    check_half_decay(lengths);
    const std::size_t K = lengths.size();
    const std::uint64_t count = std::uint64_t(1) << K;
    std::vector<double> pts;
    pts.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        double x = 0.0;
        for (std::size_t j = 0; j < K; ++j) {
            if (i & (std::uint64_t(1) << (K - 1 - j))) x += lengths[j];
        }
        if (!pts.empty() && !(x > pts.back())) {
            throw ValidationError("subset sums not resolvable in double precision", "lengths");
        }
        pts.push_back(x);
    }
    GapSetMeta meta;
    meta.family = "sumset";
    meta.resolution = 0.0;
    return GapSet::from_points(std::move(pts), int(K), std::move(meta));
}

GapSet generated_set(const GapSequence& seq, int depth, const SetLimits& limits) {
    if (depth < 0) throw ValidationError("must be >= 0", "depth");
    if (depth > limits.max_depth) {
        throw ValidationError("exceeds max depth " + std::to_string(limits.max_depth), "depth");
    }
    const double total = seq.sum();
    if (std::fabs(total - 1.0) > 1e-9) {
        throw ValidationError("gap lengths must sum to 1 (got " + num(total) + ")", "sequence");
    }
    if (!seq.strictly_decreasing()) throw ValidationError("gap lengths must strictly decrease", "sequence");

    const std::size_t n = seq.size();
    const std::size_t placed = std::min<std::size_t>((std::size_t(1) << depth) - 1, n);

    // subtree sums, 1-based: L[k] = delta_k + L[2k] + L[2k+1]
    std::vector<double> subtree(n + 2, 0.0);
    for (std::size_t k = n; k >= 1; --k) {
        double s = seq.delta(k);
        if (2 * k <= n) s += subtree[2 * k];
        if (2 * k + 1 <= n) s += subtree[2 * k + 1];
        subtree[k] = s;
    }

    // In-order walk with a running position keeps neighbouring gaps ordered
    // even after rounding.
    std::vector<Interval> gaps;
    gaps.reserve(placed);
    std::size_t dropped = 0;
    double pos = 0.0;
    std::vector<std::pair<std::size_t, bool>> stack;  // (node, left subtree done)
    stack.push_back({1, false});
    while (!stack.empty()) {
        auto [k, left_done] = stack.back();
        stack.pop_back();
        if (k > n) continue;
        if (k > placed) {
            pos += subtree[k];
            continue;
        }
        if (!left_done) {
            stack.push_back({k, true});
            stack.push_back({2 * k, false});
            continue;
        }
        const double lo = pos;
        const double hi = pos + seq.delta(k);
        if (hi > lo) {
            gaps.push_back({lo, hi});
        } else {
            ++dropped;
        }
        pos = hi;
        stack.push_back({2 * k + 1, false});
    }

    GapSetMeta meta;
    meta.family = "generated";
    meta.dropped_gaps = dropped;
    return GapSet::from_gaps({0.0, std::max(1.0, pos)}, std::move(gaps), depth, std::move(meta));
}

namespace {

// The first `required` exponents are mandatory; later ones (up to `count`) are
// produced only while they stay <= soft_cap.
std::vector<int> exponents_impl(const PsiSpec& psi, int count, int required, long long soft_cap) {
    const double ln3 = std::log(3.0);
    const double log_delta0 = std::log(psi.delta0);
    constexpr long long kCap = 1LL << 40;

    auto admissible = [&](long long n, int k) {
        const double log_t = -double(n) * ln3;
        if (!(log_t < log_delta0)) return false;
        const double target = std::log(6.0) + double(k) * std::log(2.0);
        return psi.monotone_log_ratio(log_t) >= target;
    };

    std::vector<int> out;
    out.reserve(std::size_t(std::max(count, 0)));
    long long prev = 0;
    for (int k = 1; k <= count; ++k) {
        long long lo = prev + 1;
        if (k > required && (lo > soft_cap || !admissible(soft_cap, k))) break;
        if (!admissible(lo, k)) {
            // monotone in n: exponential search, then bisection
            long long step = 1;
            long long hi = lo + step;
            while (!admissible(hi, k)) {
                lo = hi;
                step *= 2;
                hi = lo + step;
                if (hi > kCap) {
                    throw ValidationError("no admissible n_k found at k=" + std::to_string(k), "psi");
                }
            }
            while (hi - lo > 1) {
                const long long mid = lo + (hi - lo) / 2;
                (admissible(mid, k) ? hi : lo) = mid;
            }
            lo = hi;
        }
        if (lo > 0x7fffffffLL) {
            throw ValidationError("n_k exceeds integer range at k=" + std::to_string(k), "psi");
        }
        out.push_back(int(lo));
        prev = lo;
    }
    return out;
}

} // namespace

std::vector<int> triadic_exponents(const PsiSpec& psi, int count) {
    psi.validate();
    return exponents_impl(psi, count, count, 0x7fffffffLL);
}

Theorem3Set theorem3_set(const PsiSpec& psi, int K, const SetLimits& limits) {
    if (K < 1) throw ValidationError("must be >= 1", "K");
    if (K > limits.max_chain_order) {
        throw ValidationError("exceeds max chain order " + std::to_string(limits.max_chain_order), "K");
    }
    psi.validate();

    const int used = K * K + K;
    // extra terms only feed the limit point and the resolution; 3^{-1100} is
    // far below the smallest double, so later terms cannot matter
    const int tail_terms = (K + 1) * (K + 1) + 64;
    Theorem3Set out;
    out.psi_replaced = !psi.ratio_monotone();
    out.exponents = exponents_impl(psi, std::max(used, tail_terms), used, 1100);

    std::vector<double> l(out.exponents.size());
    for (std::size_t k = 0; k < l.size(); ++k) l[k] = std::pow(3.0, -double(out.exponents[k]));

    auto partial = [&](int upto) {
        double s = 0.0;
        for (int k = 0; k < upto; ++k) s += l[std::size_t(k)];
        return s;
    };
    out.limit = partial(int(l.size()));
    double tail = 0.0;
    for (std::size_t k = l.size(); k-- > std::min(l.size(), std::size_t((K + 1) * (K + 1)));) tail += l[k];

    std::vector<double> pts;
    for (int n = 1; n <= K; ++n) {
        ChainCertificate cert;
        cert.order = n;
        cert.alpha = partial(n * n);
        cert.chain.base = cert.alpha;
        bool ok = true;
        for (int k = n * n; k < n * n + n; ++k) {
            cert.exponents.push_back(out.exponents[std::size_t(k)]);
            cert.chain.lengths.push_back(l[std::size_t(k)]);
            if (k > n * n && !(out.exponents[std::size_t(k)] > out.exponents[std::size_t(k - 1)])) ok = false;
        }
        cert.beta = partial(n * n + n);
        // 3^{-m} <= 3^{-n}/3 < 3^{-n}/2 whenever m > n, so strictly increasing
        // exponents give distinct subset sums
        cert.exact_valid = ok && !cert.exponents.empty() && cert.exponents.front() > 0;
        cert.resolved = cert.chain.distinct();
        for (double x : cert.chain.points()) pts.push_back(x);
        out.chains.push_back(std::move(cert));
    }
    std::sort(pts.begin(), pts.end());
    const std::size_t before = pts.size();
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    out.merged_points = before - pts.size();
    out.points = pts;
    if (!std::binary_search(pts.begin(), pts.end(), out.limit)) {
        pts.insert(std::upper_bound(pts.begin(), pts.end(), out.limit), out.limit);
    }

    GapSetMeta meta;
    meta.family = "theorem3";
    meta.resolution = tail;
    out.set = GapSet::from_points(std::move(pts), K, std::move(meta));
    return out;
}

} // namespace lplab
