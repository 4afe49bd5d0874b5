#pragma once

#include "lplab/set_model.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lplab {

/// Which gap each point falls in. A finite F splits S when every point lies
/// strictly inside a gap and no two points share one.
struct SplittingCertificate {
    std::vector<double> points;     // sorted
    std::vector<long> gap_index;    // -1: in a component or outside the window
    bool valid = false;
    long first_offender = -1;       // index into points of the first failure
    std::string reason;
};

SplittingCertificate splits(std::span<const double> points, const GapSet& set);

/// Arithmetic progression {a + k d : k = 1..N}.
struct APSpec {
    double a = 0.0;
    double d = 1.0;
    long N = 1;

    void validate() const;
    std::vector<double> points() const;
};

struct SplittingSubset {
    std::size_t nu = 0;             // number of distinct gaps hit
    std::vector<double> subset;     // leftmost AP point in each hit gap
    std::vector<long> gaps;
};

/// Largest subset of the progression that splits the set: one point per gap
/// hit, keeping the leftmost. Points outside the window are ignored.
SplittingSubset max_splitting_subset(const GapSet& set, const APSpec& ap);

/// No shift in (-delta, delta) moves F off the components.
class InfeasibleShift : public std::runtime_error {
public:
    InfeasibleShift(double delta, double covered)
        : std::runtime_error("no shift |xi| < " + std::to_string(delta) +
                             " avoids the set (covered " + std::to_string(covered) + " of " +
                             std::to_string(2.0 * delta) + ")"),
          delta_(delta), covered_(covered) {}

    double delta() const noexcept { return delta_; }
    double covered() const noexcept { return covered_; }

private:
    double delta_;
    double covered_;
};

/// Smallest-|xi| midpoint among the connected pieces of
/// {xi in (-delta, delta) : (F + xi) misses every component}; 0 when F
/// already misses them. Throws InfeasibleShift when the set is empty.
double lemma2_shift(std::span<const double> points, const GapSet& set, double delta);

enum class ChainSearch { Exact, Heuristic };

struct ChainSearchResult {
    std::optional<Chain> chain;
    bool exhaustive = true;   // false for heuristic searches: "none" is not a proof
};

/// Looks for an n-chain inside `points` (membership up to eps). Exact mode is
/// complete and limited to n <= 3 and at most 64 points; heuristic mode grows
/// a chain greedily from each base.
ChainSearchResult find_chain(std::span<const double> points, int n,
                             ChainSearch mode = ChainSearch::Exact, double eps = 1e-12);

struct Lemma5Result {
    std::vector<double> points;    // S = union of F_n, sorted
    std::vector<Chain> chains;     // F_n as chains based at alpha_n
    std::vector<Interval> spans;   // [alpha_n, beta_n]
};

/// F_n = l_1 + ... + l_{n^2} + {sum eps_k l_k : n^2 < k <= n^2 + n} for
/// n = 1..n_max. Needs l_{k+1} < l_k / 2 and at least n_max^2 + n_max terms.
Lemma5Result lemma5_sequence(const std::vector<double>& lengths, int n_max);

class ChainSplitFailure : public std::runtime_error {
public:
    ChainSplitFailure(const std::string& what, long blocking_gap)
        : std::runtime_error(what), blocking_gap_(blocking_gap) {}
    long blocking_gap() const noexcept { return blocking_gap_; }

private:
    long blocking_gap_;
};

struct ChainSplit {
    double shift = 0.0;
    double delta = 0.0;              // search radius that produced the shift
    SplittingCertificate certificate;
};

/// Shifts the chain off the set with lemma2_shift, halving the search radius
/// from delta0 down to `floor` until the shifted chain splits the set.
ChainSplit chain_split_shift(const Chain& chain, const GapSet& set, double delta0,
                             double floor = 1e-12);

} // namespace lplab
