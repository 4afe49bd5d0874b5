#pragma once

#include "lplab/fft.hpp"
#include "lplab/fit.hpp"
#include "lplab/set_model.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lplab {

/// sum_k c_k e^{ikx} with distinct integer frequencies.
class TrigPolynomial {
public:
    using Term = std::pair<long, Complex>;

    TrigPolynomial() = default;
    explicit TrigPolynomial(std::vector<Term> terms);

    /// Dirichlet-type kernel sum_{k=1}^N e^{ikx}.
    static TrigPolynomial dirichlet(long N);

    const std::vector<Term>& terms() const noexcept { return terms_; }
    long bandwidth() const noexcept;           // max |k|
    double coefficient_l2() const;             // (sum |c_k|^2)^{1/2}
    Complex operator()(double x) const;

private:
    std::vector<Term> terms_;
};

/// Samples on x_j = 2 pi j / M. M is a power of two, at least 4.
class GridSignal {
public:
    explicit GridSignal(std::vector<Complex> samples);

    /// Throws ValidationError when M < 4 * bandwidth (aliasing).
    static GridSignal from_polynomial(const TrigPolynomial& poly, std::size_t M);

    /// From coefficients indexed by DFT bin (k mod M).
    static GridSignal from_coefficients(std::span<const Complex> bins);

    std::size_t size() const noexcept { return samples_.size(); }
    const std::vector<Complex>& samples() const noexcept { return samples_; }

    /// Trigonometric coefficients c_k by DFT bin, normalized by 1/M.
    std::vector<Complex> coefficients() const;

private:
    std::vector<Complex> samples_;
};

/// Power of two >= max(64, 16 (bandwidth + 1)).
std::size_t default_grid(long bandwidth);

/// Signed frequency of DFT bin b on a grid of size M: b or b - M.
long bin_frequency(std::size_t bin, std::size_t M);

/// ((1/M) sum_j |f(x_j)|^p)^{1/p}, normalized so that ||1||_p = 1.
double lp_norm(const GridSignal& f, double p);

/// Norm of a polynomial on a grid (M = 0 picks default_grid). For p = 2 the
/// grid value is checked against the coefficient l2 norm.
double lp_norm(const TrigPolynomial& f, double p, std::size_t M = 0);

/// Sharp real Khintchine lower constant A_p (Haagerup) for 0 < p < 2; 1 for p >= 2.
double khintchine_constant(double p);

/// Structured record of a numerical experiment.
struct ProbeReport {
    struct Table {
        std::vector<std::string> columns;
        std::vector<std::vector<double>> rows;
    };

    std::string experiment;
    std::uint64_t seed = 0;
    long trials = 0;
    std::map<std::string, double> parameters;
    std::map<std::string, double> scalars;
    std::map<std::string, bool> flags;
    std::map<std::string, std::string> notes;
    std::map<std::string, Table> tables;
};

struct DirichletScaling {
    ExponentFit fit;
    double p = 0.0;
    double q = 0.0;
    double target = 0.0;   // 1/q
    std::vector<long> N;
    std::vector<double> norms;
    ProbeReport report() const;
};

/// Log-log fit of ||sum_{k=1}^N e^{ikx}||_p over N_list (at least 4 values).
DirichletScaling dirichlet_scaling(double p, std::span<const long> N_list, std::size_t oversample = 16);

/// Assignment of DFT bins to half-open scaled gaps [a_j s, b_j s).
struct BandPartition {
    std::size_t M = 0;
    std::vector<long> band_of_bin;   // -1: bin lies in the set or outside the window
    std::size_t band_count = 0;      // number of gaps

    std::vector<std::size_t> admissible_bins(long max_abs_frequency) const;
};

BandPartition partition_bins(const GapSet& set, double freq_scale, std::size_t M);

/// S(f) = (sum_k |S_k f|^2)^{1/2} on the grid, (S_k f)^ = 1_{I_k} f^.
/// Throws when a nonzero coefficient sits outside every band or when f is not
/// band-limited to |k| < M/4.
GridSignal square_function(const GridSignal& f, const GapSet& set, double freq_scale);

/// The nonzero pieces S_k f, keyed by band index.
std::vector<std::pair<long, GridSignal>> band_pieces(const GridSignal& f, const GapSet& set,
                                                     double freq_scale);

struct FrameProbe {
    double c1_hat = 0.0;        // min ||S f||_p / ||f||_p over all candidates
    double c2_hat = 0.0;        // max
    double random_min = 0.0;
    double random_max = 0.0;
    double random_mean = 0.0;
    std::size_t admissible_bins = 0;
    std::size_t bands_used = 0;
    std::vector<double> random_ratios;
    std::vector<double> adversarial_ratios;
    ProbeReport report;
};

/// Empirical frame range of the square function over seeded random
/// band-limited signals (standard complex Gaussian coefficients on admissible
/// bins, trial t seeded with seed + t) plus fixed adversarial candidates.
FrameProbe frame_probe(const GapSet& set, double p, long trials, std::size_t M, std::uint64_t seed,
                       double freq_scale = 1.0);

enum class SignMode { Auto, Exhaustive, MonteCarlo };

const char* to_string(SignMode mode);

struct RademacherExperiment {
    double mean_pth_power = 0.0;     // E_theta ||sum r_j e^{i k_j x}||_p^p
    double average_norm = 0.0;       // its p-th root
    double stderr_pth_power = 0.0;   // Monte Carlo only
    double dirichlet_norm = 0.0;     // ||sum_{k=1}^N e^{ikx}||_p
    double khintchine_lower = 0.0;   // A_p sqrt(nu / 2), valid for any frequencies
    double diagnostic = 0.0;         // nu^{1/2} / N^{1/q}
    std::size_t patterns = 0;
    bool exhaustive = true;
    ProbeReport report;
};

RademacherExperiment rademacher_experiment(const std::vector<long>& k_list, long N, double p,
                                           SignMode mode = SignMode::Auto, long trials = 1000,
                                           std::uint64_t seed = 0, std::size_t M = 0);

struct KhintchineRatio {
    double ratio = 0.0;          // (E|sum c_j r_j|^p)^{1/p} / (sum c_j^2)^{1/2}
    double stderr_ratio = 0.0;   // Monte Carlo only
    std::size_t patterns = 0;
    bool exhaustive = true;
};

/// Exhaustive over 2^n sign patterns when n <= 12 (Auto) or on request
/// (n <= 20); Monte Carlo otherwise. p in [1, 2).
KhintchineRatio khintchine_ratio(const std::vector<double>& coefficients, double p,
                                 SignMode mode = SignMode::Auto, long trials = 100000,
                                 std::uint64_t seed = 0);

struct ChainRatio {
    double one_dim_norm = 0.0;       // ||1 + e^{it}||_p
    double r_p = 0.0;                // ||1 + e^{it}||_2 / ||1 + e^{it}||_p
    double R_n = 0.0;                // r_p^n
    std::optional<double> grid_norm; // ||sum_eps e^{i(eps,t)}||_p on an n-D grid (n <= 3)
    std::optional<double> factorized_norm;  // one_dim_norm^n
};

/// ||1 + e^{it}||_p by tanh-sinh quadrature.
double binomial_norm(double p);

ChainRatio chain_ratio(int n, double p);

/// Direct n-D grid quadrature (M points per axis) of ||sum_eps e^{i(eps,t)}||_p.
double chain_grid_norm(int n, double p, std::size_t M);

struct Lemma4Growth {
    double r_p = 0.0;
    std::vector<int> n;
    std::vector<double> R_n;
    std::vector<bool> exceeds_prior;
    bool no_uniform_constant = false;   // r_p > 1, so R_n is unbounded
    ProbeReport report;
};

Lemma4Growth lemma4_growth(const std::vector<int>& n_list, double p);

} // namespace lplab
