#pragma once

#include "lplab/interval.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace lplab {

/// Caps that keep enumerations (2^depth components, 2^K subset sums) at
/// desk scale.
struct SetLimits {
    int max_depth = 20;
    int max_terms = 20;
    int max_chain_order = 6;
};

/// Descriptive data carried alongside a GapSet. `resolution` < 0 means
/// "derive from the components" (largest positive component length).
struct GapSetMeta {
    std::string family = "custom";
    double resolution = -1.0;
    std::size_t dropped_gaps = 0;
};

/// A closed set inside a closed window, stored as the window and its sorted
/// open complementary gaps. Components are the closed pieces left after
/// removing the gaps; zero-length components represent isolated points.
///
/// A GapSet is a truncation: the ideal set is contained in the union of the
/// components. `residual()` is the total component length and `resolution()`
/// the size of the largest truncation feature.
class GapSet {
public:
    /// The single point {0}.
    GapSet() = default;

    /// Validates and sorts. Throws ValidationError on overlapping gaps, gaps
    /// leaving the window, zero-length gaps, non-finite numbers, or a window
    /// with hi < lo. A zero-length window is allowed only without gaps.
    static GapSet from_gaps(Interval window, std::vector<Interval> gaps, int depth = 0,
                            GapSetMeta meta = {});

    /// Finite point set: window [min, max], one gap between consecutive
    /// points. Points must be finite and pairwise distinct.
    static GapSet from_points(std::vector<double> points, int depth = 0, GapSetMeta meta = {});

    const Interval& window() const noexcept { return window_; }
    const std::vector<Interval>& gaps() const noexcept { return gaps_; }
    int depth() const noexcept { return depth_; }
    double residual() const noexcept { return residual_; }
    double resolution() const noexcept { return meta_.resolution; }
    const std::string& family() const noexcept { return meta_.family; }
    std::size_t dropped_gaps() const noexcept { return meta_.dropped_gaps; }
    const GapSetMeta& meta() const noexcept { return meta_; }

    std::vector<Interval> components() const;
    std::size_t component_count() const noexcept { return gaps_.size() + 1; }

    /// Index of the gap whose open interval contains x, or -1.
    long gap_containing(double x) const;

    /// True if x lies in a (closed) component.
    bool contains(double x) const;

    /// Smallest delta for which neighbourhood-type quantities are trusted.
    double reliable_delta() const noexcept { return 3.0 * meta_.resolution; }

private:
    Interval window_;
    std::vector<Interval> gaps_;
    int depth_ = 0;
    double residual_ = 0.0;
    GapSetMeta meta_;
};

enum class SequenceFamily { Explicit, Geometric, Stretched, Custom };

const char* to_string(SequenceFamily family);

/// Positive gap lengths delta_1, delta_2, ... (stored 0-based).
class GapSequence {
public:
    static GapSequence explicit_terms(std::vector<double> deltas);

    /// delta_k = a exp(-k b), k >= 1. Generation stops at max_terms or when
    /// a term underflows.
    static GapSequence geometric(double a, double b, std::size_t max_terms = 4096);

    /// Geometric with a = e^b - 1 so that the infinite sum is 1.
    static GapSequence normalized_geometric(double b, std::size_t max_terms = 4096);

    /// delta_k = a exp(-k rate(k)) with a non-decreasing rate.
    static GapSequence stretched(double a, std::function<double(double)> rate,
                                 std::size_t max_terms = 4096);

    /// Stretched with a chosen so that the generated terms sum to 1.
    static GapSequence normalized_stretched(std::function<double(double)> rate,
                                            std::size_t max_terms = 4096);

    const std::vector<double>& deltas() const noexcept { return deltas_; }
    std::size_t size() const noexcept { return deltas_.size(); }
    /// 1-based access, matching the usual delta_k indexing.
    double delta(std::size_t k) const { return deltas_.at(k - 1); }
    SequenceFamily family() const noexcept { return family_; }
    double scale() const noexcept { return a_; }
    double rate() const noexcept { return b_; }

    double sum() const;
    bool strictly_decreasing() const;
    /// max_k delta_{k+1} / delta_k (0 for fewer than two terms).
    double max_ratio() const;
    /// Ratio condition delta_{k+1}/delta_k <= tau for every stored k.
    bool ratio_condition(double tau) const { return max_ratio() <= tau; }

private:
    std::vector<double> deltas_;
    SequenceFamily family_ = SequenceFamily::Explicit;
    double a_ = 0.0;
    double b_ = 0.0;
};

/// The 2^n points base + sum eps_j lengths_j, eps in {0,1}^n.
struct Chain {
    double base = 0.0;
    std::vector<double> lengths;

    int order() const noexcept { return int(lengths.size()); }
    /// All 2^n subset sums, sorted ascending (duplicates kept).
    std::vector<double> points() const;
    /// True when the 2^n sums are pairwise separated by more than eps.
    bool distinct(double eps = 0.0) const;
};

/// Gauge function psi on (0, delta0) with psi(d)/d -> +inf as d -> 0.
struct PsiSpec {
    enum class Kind { Power, PowerLog, Tabulated };

    Kind kind = Kind::Power;
    double parameter = 0.5;  // alpha for Power, beta for PowerLog
    double delta0 = 1.0;
    /// (delta, psi) knots for Tabulated, interpolated linearly in log-log.
    std::vector<std::pair<double, double>> table;

    static PsiSpec power(double alpha, double delta0 = 1.0);
    static PsiSpec powerlog(double beta, double delta0 = 0.5);
    static PsiSpec tabulated(std::vector<std::pair<double, double>> knots);

    /// Throws ValidationError when psi(d)/d does not diverge at 0.
    void validate() const;

    /// psi(delta) for 0 < delta < delta0.
    double operator()(double delta) const;

    /// log(psi(t)/t) at log t = log_t, before monotone replacement.
    double log_ratio(double log_t) const;

    /// log of inf_{0<s<=t} psi(s)/s, the ratio of the monotone replacement
    /// psi~(t) = t inf_{0<s<=t} psi(s)/s.
    double monotone_log_ratio(double log_t) const;

    /// Whether psi(t)/t is already non-increasing in t (so psi~ = psi).
    bool ratio_monotone() const;

    std::string describe() const;
};

/// Certificate that F_n = alpha_n + {sum eps_k l_k : n^2 < k <= n^2+n} is an
/// n-chain. Validity is decided on the integer exponents (l_k = 3^{-n_k}), so
/// it holds even when the doubles cannot resolve all 2^n points.
struct ChainCertificate {
    int order = 0;
    std::vector<int> exponents;   // n_k for the chain lengths
    Chain chain;                  // base alpha_n, lengths 3^{-n_k} as doubles
    double alpha = 0.0;
    double beta = 0.0;
    bool exact_valid = false;     // l_{k+1} < l_k / 2 on exact exponents
    bool resolved = false;        // 2^n distinct doubles
};

struct Theorem3Set {
    GapSet set;                   // representable points of S plus the limit
    std::vector<double> points;   // S (sorted, doubles, duplicates merged)
    double limit = 0.0;
    std::vector<int> exponents;   // n_1 < n_2 < ... < n_{K^2+K}
    std::vector<ChainCertificate> chains;
    bool psi_replaced = false;    // psi(d)/d was non-monotone
    std::size_t merged_points = 0;  // subset sums that collapsed in double
};

GapSet dyadic_set(int k_min, int k_max);
GapSet cantor_triadic(int depth, const SetLimits& limits = {});
GapSet sum_set(const std::vector<double>& lengths, const SetLimits& limits = {});
GapSet generated_set(const GapSequence& seq, int depth, const SetLimits& limits = {});
Theorem3Set theorem3_set(const PsiSpec& psi, int K, const SetLimits& limits = {});

/// Smallest strictly increasing n_1 < n_2 < ... (count terms) satisfying
/// 6 * 2^k <= psi~(3^{-n_k}) / 3^{-n_k}.
std::vector<int> triadic_exponents(const PsiSpec& psi, int count);

/// Throws ValidationError unless every l_{k+1} < l_k / 2 and l_k > 0.
void check_half_decay(const std::vector<double>& lengths, const char* field = "lengths");

} // namespace lplab
