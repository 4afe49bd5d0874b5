#include "lplab/fourier_probe.hpp"

#include "lplab/errors.hpp"
#include "lplab/parallel.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

namespace lplab {

namespace {

void require_p(double p, const char* field = "p") {
    if (!(p >= 1.0) || !std::isfinite(p)) throw ValidationError("must be a finite value >= 1", field);
}

double conjugate(double p) { return p == 1.0 ? std::numeric_limits<double>::infinity() : p / (p - 1.0); }

double mean_abs_pow(std::span<const Complex> samples, double p) {
    double acc = 0.0;
    if (p == 2.0) {
        for (const auto& z : samples) acc += std::norm(z);
    } else {
        for (const auto& z : samples) acc += std::pow(std::abs(z), p);
    }
    return acc / double(samples.size());
}

// S(f)^2 pointwise from trigonometric coefficients (by bin). Bins must already
// be checked against the partition.
std::vector<double> square_sum(const std::vector<Complex>& coeffs, const BandPartition& part) {
    const std::size_t M = coeffs.size();
    std::map<long, std::vector<std::size_t>> by_band;
    for (std::size_t b = 0; b < M; ++b) {
        if (coeffs[b] != Complex(0.0, 0.0)) by_band[part.band_of_bin[b]].push_back(b);
    }
    std::vector<double> sq(M, 0.0);
    std::vector<Complex> masked(M);
    for (const auto& [band, bins] : by_band) {
        if (bins.size() == 1) {
            const double mag = std::norm(coeffs[bins.front()]);
            for (double& v : sq) v += mag;
            continue;
        }
        std::fill(masked.begin(), masked.end(), Complex(0.0, 0.0));
        for (std::size_t b : bins) masked[b] = coeffs[b];
        const auto piece = inverse_dft(masked);
        for (std::size_t j = 0; j < M; ++j) sq[j] += std::norm(piece[j]);
    }
    return sq;
}

// Coefficients with numerical noise removed; throws on aliasing or bins
// outside every band.
std::vector<Complex> checked_coefficients(const GridSignal& f, const BandPartition& part) {
    auto c = f.coefficients();
    const std::size_t M = c.size();
    double peak = 0.0;
    for (const auto& z : c) peak = std::max(peak, std::abs(z));
    const double threshold = 1e-12 * peak;
    for (std::size_t b = 0; b < M; ++b) {
        if (std::abs(c[b]) <= threshold) {
            c[b] = 0.0;
            continue;
        }
        const long k = bin_frequency(b, M);
        if (std::labs(k) >= long(M / 4)) {
            throw ValidationError("coefficient at frequency " + std::to_string(k) +
                                      " is not band-limited to |k| < M/4 (aliasing)",
                                  "signal");
        }
        if (part.band_of_bin[b] < 0) {
            throw ValidationError("nonzero coefficient at frequency " + std::to_string(k) +
                                      " lies in the set or outside the window (ambiguous band)",
                                  "signal");
        }
    }
    return c;
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) { return std::mt19937_64(seed + trial); }

} // namespace

// ---------------------------------------------------------------- polynomials and grids

TrigPolynomial::TrigPolynomial(std::vector<Term> terms) : terms_(std::move(terms)) {
    std::set<long> seen;
    for (const auto& [k, c] : terms_) {
        if (!seen.insert(k).second) throw ValidationError("repeated frequency " + std::to_string(k), "terms");
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw ValidationError("non-finite coefficient", "terms");
        }
    }
}

TrigPolynomial TrigPolynomial::dirichlet(long N) {
    if (N < 1) throw ValidationError("must be >= 1", "N");
    std::vector<Term> terms;
    terms.reserve(std::size_t(N));
    for (long k = 1; k <= N; ++k) terms.emplace_back(k, Complex(1.0, 0.0));
    return TrigPolynomial(std::move(terms));
}

long TrigPolynomial::bandwidth() const noexcept {
    long w = 0;
    for (const auto& t : terms_) w = std::max(w, std::labs(t.first));
    return w;
}

double TrigPolynomial::coefficient_l2() const {
    double s = 0.0;
    for (const auto& t : terms_) s += std::norm(t.second);
    return std::sqrt(s);
}

Complex TrigPolynomial::operator()(double x) const {
    Complex s = 0.0;
    for (const auto& [k, c] : terms_) s += c * std::polar(1.0, double(k) * x);
    return s;
}

GridSignal::GridSignal(std::vector<Complex> samples) : samples_(std::move(samples)) {
    if (samples_.size() < 4 || !is_power_of_two(samples_.size())) {
        throw ValidationError("grid size must be a power of two >= 4", "M");
    }
}

GridSignal GridSignal::from_polynomial(const TrigPolynomial& poly, std::size_t M) {
    if (M < 4 || !is_power_of_two(M)) throw ValidationError("grid size must be a power of two >= 4", "M");
    if (std::size_t(poly.bandwidth()) * 4 > M) {
        throw ValidationError("grid of " + std::to_string(M) + " points aliases bandwidth " +
                                  std::to_string(poly.bandwidth()),
                              "M");
    }
    std::vector<Complex> bins(M);
    const long m = long(M);
    for (const auto& [k, c] : poly.terms()) bins[std::size_t(((k % m) + m) % m)] = c;
    return from_coefficients(bins);
}

GridSignal GridSignal::from_coefficients(std::span<const Complex> bins) { return GridSignal(inverse_dft(bins)); }

std::vector<Complex> GridSignal::coefficients() const {
    auto c = forward_dft(samples_);
    const double inv = 1.0 / double(samples_.size());
    for (auto& z : c) z *= inv;
    return c;
}

std::size_t default_grid(long bandwidth) {
    return next_power_of_two(std::max<std::size_t>(64, 16 * (std::size_t(std::max(bandwidth, 0L)) + 1)));
}

long bin_frequency(std::size_t bin, std::size_t M) {
    return bin < M / 2 ? long(bin) : long(bin) - long(M);
}

double lp_norm(const GridSignal& f, double p) {
    require_p(p);
    return std::pow(mean_abs_pow(f.samples(), p), 1.0 / p);
}

double lp_norm(const TrigPolynomial& f, double p, std::size_t M) {
    require_p(p);
    if (M == 0) M = default_grid(f.bandwidth());
    const GridSignal g = GridSignal::from_polynomial(f, M);
    const double value = lp_norm(g, p);
    if (p == 2.0) {
        const double exact = f.coefficient_l2();
        if (std::fabs(value - exact) > 1e-9 * std::max(1.0, exact)) {
            throw ReliabilityError("grid L2 norm disagrees with coefficient norm (aliasing?)");
        }
    }
    return value;
}

double khintchine_constant(double p) {
    if (p >= 2.0) return 1.0;
    // Haagerup's sharp constants; p0 solves Gamma((p+1)/2) = sqrt(pi)/2
    constexpr double p0 = 1.84742;
    if (p <= p0) return std::pow(2.0, 0.5 - 1.0 / p);
    return std::sqrt(2.0) * std::pow(std::tgamma(0.5 * (p + 1.0)) / std::sqrt(std::numbers::pi), 1.0 / p);
}

// ---------------------------------------------------------------- Dirichlet scaling

ProbeReport DirichletScaling::report() const {
    ProbeReport r;
    r.experiment = "dirichlet";
    r.parameters["p"] = p;
    r.scalars["exponent"] = fit.exponent;
    r.scalars["constant"] = fit.constant;
    r.scalars["r2"] = fit.r2;
    r.scalars["target_exponent"] = target;
    r.scalars["points_used"] = double(fit.points_used());
    ProbeReport::Table t{{"N", "p", "value"}, {}};
    for (std::size_t i = 0; i < N.size(); ++i) t.rows.push_back({double(N[i]), p, norms[i]});
    r.tables["norms"] = std::move(t);
    return r;
}

DirichletScaling dirichlet_scaling(double p, std::span<const long> N_list, std::size_t oversample) {
    if (!(p > 1.0) || !std::isfinite(p)) throw ValidationError("must be > 1", "p");
    if (N_list.size() < 4) throw ValidationError("need at least 4 values", "N_list");
    if (oversample < 4) throw ValidationError("must be >= 4", "oversample");
    DirichletScaling out;
    out.p = p;
    out.q = conjugate(p);
    out.target = 1.0 / out.q;
    out.N.assign(N_list.begin(), N_list.end());
    out.norms.resize(N_list.size());
    parallel_for(N_list.size(), [&](std::size_t i) {
        const long N = N_list[i];
        const std::size_t M = next_power_of_two(std::max<std::size_t>(64, oversample * std::size_t(N)));
        out.norms[i] = lp_norm(TrigPolynomial::dirichlet(N), p, M);
    });
    std::vector<double> xs(out.N.begin(), out.N.end());
    out.fit = fit_power_law(xs, out.norms, 4);
    return out;
}

// ---------------------------------------------------------------- square function

std::vector<std::size_t> BandPartition::admissible_bins(long max_abs_frequency) const {
    std::vector<std::size_t> out;
    for (std::size_t b = 0; b < M; ++b) {
        if (band_of_bin[b] >= 0 && std::labs(bin_frequency(b, M)) <= max_abs_frequency) out.push_back(b);
    }
    return out;
}

BandPartition partition_bins(const GapSet& set, double freq_scale, std::size_t M) {
    if (!(freq_scale > 0.0) || !std::isfinite(freq_scale)) throw ValidationError("must be positive", "freq_scale");
    if (M < 4 || !is_power_of_two(M)) throw ValidationError("grid size must be a power of two >= 4", "M");
    const auto& gaps = set.gaps();
    BandPartition part;
    part.M = M;
    part.band_count = gaps.size();
    part.band_of_bin.assign(M, -1);
    for (std::size_t b = 0; b < M; ++b) {
        const double k = double(bin_frequency(b, M));
        auto it = std::upper_bound(gaps.begin(), gaps.end(), k,
                                   [&](double v, const Interval& g) { return v < g.lo * freq_scale; });
        if (it == gaps.begin()) continue;
        --it;
        if (k < it->hi * freq_scale) part.band_of_bin[b] = long(it - gaps.begin());
    }
    return part;
}

GridSignal square_function(const GridSignal& f, const GapSet& set, double freq_scale) {
    const BandPartition part = partition_bins(set, freq_scale, f.size());
    const auto coeffs = checked_coefficients(f, part);
    auto sq = square_sum(coeffs, part);
    std::vector<Complex> out(sq.size());
    for (std::size_t j = 0; j < sq.size(); ++j) out[j] = std::sqrt(sq[j]);
    return GridSignal(std::move(out));
}

std::vector<std::pair<long, GridSignal>> band_pieces(const GridSignal& f, const GapSet& set,
                                                     double freq_scale) {
    const BandPartition part = partition_bins(set, freq_scale, f.size());
    const auto coeffs = checked_coefficients(f, part);
    std::map<long, std::vector<Complex>> masked;
    for (std::size_t b = 0; b < coeffs.size(); ++b) {
        if (coeffs[b] == Complex(0.0, 0.0)) continue;
        auto& m = masked[part.band_of_bin[b]];
        if (m.empty()) m.assign(coeffs.size(), Complex(0.0, 0.0));
        m[b] = coeffs[b];
    }
    std::vector<std::pair<long, GridSignal>> out;
    for (auto& [band, bins] : masked) out.emplace_back(band, GridSignal::from_coefficients(bins));
    return out;
}

FrameProbe frame_probe(const GapSet& set, double p, long trials, std::size_t M, std::uint64_t seed,
                       double freq_scale) {
    require_p(p);
    if (trials < 1) throw ValidationError("must be >= 1", "trials");
    const BandPartition part = partition_bins(set, freq_scale, M);
    const auto admissible = part.admissible_bins(long(M / 4) - 1);
    if (admissible.empty()) throw ValidationError("no admissible frequency bins", "freq_scale");

    // adversarial candidates: all ones, alternating signs, one per band
    std::vector<std::vector<Complex>> adversarial;
    {
        std::vector<Complex> ones(M), alternating(M);
        for (std::size_t i = 0; i < admissible.size(); ++i) {
            ones[admissible[i]] = 1.0;
            alternating[admissible[i]] = (i % 2 == 0) ? 1.0 : -1.0;
        }
        adversarial.push_back(std::move(ones));
        adversarial.push_back(std::move(alternating));
        std::map<long, std::vector<Complex>> per_band;
        for (std::size_t b : admissible) {
            auto& v = per_band[part.band_of_bin[b]];
            if (v.empty()) v.assign(M, Complex(0.0, 0.0));
            v[b] = 1.0;
        }
        for (auto& [band, v] : per_band) {
            if (adversarial.size() >= 66) break;
            adversarial.push_back(std::move(v));
        }
    }

    auto ratio_of = [&](const std::vector<Complex>& coeffs) {
        const auto f = inverse_dft(coeffs);
        const auto sq = square_sum(coeffs, part);
        double num = 0.0;
        if (p == 2.0) {
            for (double v : sq) num += v;
        } else {
            for (double v : sq) num += std::pow(v, 0.5 * p);
        }
        num /= double(M);
        return std::pow(num / mean_abs_pow(f, p), 1.0 / p);
    };

    FrameProbe out;
    out.admissible_bins = admissible.size();
    std::set<long> bands;
    for (std::size_t b : admissible) bands.insert(part.band_of_bin[b]);
    out.bands_used = bands.size();

    out.random_ratios.assign(std::size_t(trials), 0.0);
    parallel_for(std::size_t(trials), [&](std::size_t t) {
        auto rng = trial_rng(seed, t);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::vector<Complex> coeffs(M);
        for (std::size_t b : admissible) {
            const double re = normal(rng);
            const double im = normal(rng);
            coeffs[b] = Complex(re, im) * std::numbers::sqrt2 * 0.5;
        }
        out.random_ratios[t] = ratio_of(coeffs);
    });
    out.adversarial_ratios.assign(adversarial.size(), 0.0);
    parallel_for(adversarial.size(), [&](std::size_t i) { out.adversarial_ratios[i] = ratio_of(adversarial[i]); });

    out.random_min = *std::min_element(out.random_ratios.begin(), out.random_ratios.end());
    out.random_max = *std::max_element(out.random_ratios.begin(), out.random_ratios.end());
    double sum = 0.0;
    for (double r : out.random_ratios) sum += r;
    out.random_mean = sum / double(trials);
    const auto [amin, amax] = std::minmax_element(out.adversarial_ratios.begin(), out.adversarial_ratios.end());
    out.c1_hat = std::min(out.random_min, *amin);
    out.c2_hat = std::max(out.random_max, *amax);

    auto& r = out.report;
    r.experiment = "frame";
    r.seed = seed;
    r.trials = trials;
    r.parameters["p"] = p;
    r.parameters["M"] = double(M);
    r.parameters["freq_scale"] = freq_scale;
    r.scalars["c1_hat"] = out.c1_hat;
    r.scalars["c2_hat"] = out.c2_hat;
    r.scalars["spread"] = out.c2_hat / out.c1_hat;
    r.scalars["random_min"] = out.random_min;
    r.scalars["random_max"] = out.random_max;
    r.scalars["random_mean"] = out.random_mean;
    r.scalars["admissible_bins"] = double(out.admissible_bins);
    r.scalars["bands_used"] = double(out.bands_used);
    r.scalars["adversarial_candidates"] = double(adversarial.size());
    r.notes["label"] = "empirical frame range";
    return out;
}

// ---------------------------------------------------------------- sign experiments

const char* to_string(SignMode mode) {
    switch (mode) {
    case SignMode::Auto: return "auto";
    case SignMode::Exhaustive: return "exhaustive";
    case SignMode::MonteCarlo: return "montecarlo";
    }
    return "auto";
}

RademacherExperiment rademacher_experiment(const std::vector<long>& k_list, long N, double p, SignMode mode,
                                           long trials, std::uint64_t seed, std::size_t M) {
    require_p(p);
    if (k_list.empty()) throw ValidationError("empty frequency list", "k_list");
    if (N < 1) throw ValidationError("must be >= 1", "N");
    const std::size_t nu = k_list.size();
    long band = 0;
    for (long k : k_list) band = std::max(band, std::labs(k));
    if (M == 0) M = default_grid(band);
    if (M < 4 || !is_power_of_two(M) || std::size_t(band) * 4 > M) {
        throw ValidationError("grid must be a power of two >= 4 * max |k|", "M");
    }

    const bool exhaustive = mode == SignMode::Exhaustive || (mode == SignMode::Auto && nu <= 12);
    if (exhaustive && nu > 20) throw ValidationError("exhaustive mode is capped at 20 frequencies", "k_list");
    if (!exhaustive && trials < 2) throw ValidationError("Monte Carlo needs at least 2 trials", "trials");

    const long m = long(M);
    auto pattern_value = [&](auto&& sign_of) {
        std::vector<Complex> bins(M);
        for (std::size_t j = 0; j < nu; ++j) {
            bins[std::size_t(((k_list[j] % m) + m) % m)] += sign_of(j);
        }
        return mean_abs_pow(inverse_dft(bins), p);
    };

    RademacherExperiment out;
    out.exhaustive = exhaustive;
    std::vector<double> values;
    if (exhaustive) {
        // a global sign flip leaves the norm unchanged: fix the first sign
        const std::size_t count = std::size_t(1) << (nu - 1);
        values.assign(count, 0.0);
        parallel_for(count, [&](std::size_t mask) {
            values[mask] = pattern_value([&](std::size_t j) {
                return j == 0 ? 1.0 : ((mask >> (j - 1)) & 1u ? -1.0 : 1.0);
            });
        });
        out.patterns = std::size_t(1) << nu;
    } else {
        values.assign(std::size_t(trials), 0.0);
        parallel_for(std::size_t(trials), [&](std::size_t t) {
            auto rng = trial_rng(seed, t);
            std::vector<double> signs(nu);
            for (auto& s : signs) s = (rng() & 1u) ? -1.0 : 1.0;
            values[t] = pattern_value([&](std::size_t j) { return signs[j]; });
        });
        out.patterns = values.size();
    }

    double sum = 0.0;
    for (double v : values) sum += v;
    out.mean_pth_power = sum / double(values.size());
    if (!exhaustive) {
        double ss = 0.0;
        for (double v : values) ss += (v - out.mean_pth_power) * (v - out.mean_pth_power);
        out.stderr_pth_power = std::sqrt(ss / double(values.size() - 1) / double(values.size()));
    }
    out.average_norm = std::pow(out.mean_pth_power, 1.0 / p);
    out.dirichlet_norm = lp_norm(TrigPolynomial::dirichlet(N), p);
    out.khintchine_lower = khintchine_constant(p) * std::sqrt(0.5 * double(nu));
    const double q = conjugate(p);
    out.diagnostic = std::sqrt(double(nu)) / std::pow(double(N), std::isinf(q) ? 0.0 : 1.0 / q);

    auto& r = out.report;
    r.experiment = "rademacher";
    r.seed = seed;
    r.trials = exhaustive ? 0 : trials;
    r.parameters["p"] = p;
    r.parameters["N"] = double(N);
    r.parameters["nu"] = double(nu);
    r.parameters["M"] = double(M);
    r.scalars["mean_pth_power"] = out.mean_pth_power;
    r.scalars["average_norm"] = out.average_norm;
    r.scalars["stderr_pth_power"] = out.stderr_pth_power;
    r.scalars["dirichlet_norm"] = out.dirichlet_norm;
    r.scalars["khintchine_lower"] = out.khintchine_lower;
    r.scalars["diagnostic"] = out.diagnostic;
    r.scalars["patterns"] = double(out.patterns);
    r.flags["exhaustive"] = exhaustive;
    r.notes["mode"] = exhaustive ? "exhaustive" : "montecarlo";
    return out;
}

KhintchineRatio khintchine_ratio(const std::vector<double>& coefficients, double p, SignMode mode, long trials,
                                 std::uint64_t seed) {
    if (!(p >= 1.0 && p < 2.0)) throw ValidationError("must lie in [1, 2)", "p");
    if (coefficients.empty()) throw ValidationError("empty coefficient list", "coefficients");
    double l2 = 0.0;
    for (double c : coefficients) {
        if (!std::isfinite(c)) throw ValidationError("non-finite coefficient", "coefficients");
        l2 += c * c;
    }
    if (l2 == 0.0) throw ValidationError("coefficients must not all vanish", "coefficients");
    l2 = std::sqrt(l2);

    const std::size_t n = coefficients.size();
    const bool exhaustive = mode == SignMode::Exhaustive || (mode == SignMode::Auto && n <= 12);
    KhintchineRatio out;
    out.exhaustive = exhaustive;
    if (exhaustive) {
        if (n > 20) throw ValidationError("exhaustive mode is capped at 20 coefficients", "coefficients");
        const std::uint64_t count = std::uint64_t(1) << n;
        double sum = 0.0;
        for (std::uint64_t mask = 0; mask < count; ++mask) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += (mask >> j) & 1u ? -coefficients[j] : coefficients[j];
            sum += std::pow(std::fabs(s), p);
        }
        out.patterns = std::size_t(count);
        out.ratio = std::pow(sum / double(count), 1.0 / p) / l2;
        return out;
    }

    if (trials < 2) throw ValidationError("Monte Carlo needs at least 2 trials", "trials");
    std::vector<double> values(static_cast<std::size_t>(trials));
    parallel_for(values.size(), [&](std::size_t t) {
        auto rng = trial_rng(seed, t);
        double s = 0.0;
        std::uint64_t bits = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j % 64 == 0) bits = rng();
            s += (bits >> (j % 64)) & 1u ? -coefficients[j] : coefficients[j];
        }
        values[t] = std::pow(std::fabs(s), p);
    });
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / double(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double se_mean = std::sqrt(ss / double(values.size() - 1) / double(values.size()));
    out.patterns = values.size();
    out.ratio = std::pow(mean, 1.0 / p) / l2;
    // delta method for x^{1/p}
    out.stderr_ratio = mean > 0.0 ? out.ratio * se_mean / (p * mean) : 0.0;
    return out;
}

// ---------------------------------------------------------------- chain norms

double binomial_norm(double p) {
    require_p(p);
    if (p == 2.0) return std::numbers::sqrt2;
    // (1/2pi) int_0^{2pi} |2 cos(t/2)|^p dt = (1/pi) int_0^pi (2 cos(t/2))^p dt
    boost::math::quadrature::tanh_sinh<double> integrator;
    const double integral = integrator.integrate(
        [p](double t) { return std::pow(std::fabs(2.0 * std::cos(0.5 * t)), p); }, 0.0, std::numbers::pi);
    return std::pow(integral / std::numbers::pi, 1.0 / p);
}

double chain_grid_norm(int n, double p, std::size_t M) {
    require_p(p);
    if (n < 1 || n > 3) throw ValidationError("grid quadrature supports n = 1..3", "n");
    if (M < 4) throw ValidationError("must be >= 4", "M");
    std::vector<Complex> phase(M);
    for (std::size_t j = 0; j < M; ++j) phase[j] = std::polar(1.0, 2.0 * std::numbers::pi * double(j) / double(M));

    const std::size_t terms = std::size_t(1) << n;
    const std::size_t outer = M;  // parallelize over the first axis
    std::vector<double> partial(outer, 0.0);
    parallel_for(outer, [&](std::size_t i0) {
        double acc = 0.0;
        const std::size_t inner = n == 1 ? 1 : (n == 2 ? M : M * M);
        for (std::size_t r = 0; r < inner; ++r) {
            const std::size_t idx[3] = {i0, n >= 2 ? r % M : 0, n == 3 ? r / M : 0};
            Complex s = 0.0;
            for (std::size_t eps = 0; eps < terms; ++eps) {
                std::size_t dot = 0;
                for (int j = 0; j < n; ++j) {
                    if (eps & (std::size_t(1) << j)) dot += idx[j];
                }
                s += phase[dot % M];
            }
            acc += std::pow(std::abs(s), p);
        }
        partial[i0] = acc;
    });
    double total = 0.0;
    for (double v : partial) total += v;
    double points = 1.0;
    for (int j = 0; j < n; ++j) points *= double(M);
    return std::pow(total / points, 1.0 / p);
}

ChainRatio chain_ratio(int n, double p) {
    require_p(p);
    if (n < 1) throw ValidationError("must be >= 1", "n");
    ChainRatio out;
    out.one_dim_norm = binomial_norm(p);
    out.r_p = std::numbers::sqrt2 / out.one_dim_norm;
    out.R_n = std::pow(out.r_p, double(n));
    if (n <= 3) {
        static constexpr std::size_t grid[] = {0, 1u << 16, 1024, 256};
        out.grid_norm = chain_grid_norm(n, p, grid[n]);
        out.factorized_norm = std::pow(out.one_dim_norm, double(n));
    }
    return out;
}

Lemma4Growth lemma4_growth(const std::vector<int>& n_list, double p) {
    if (!(p >= 1.0 && p <= 2.0)) throw ValidationError("must lie in [1, 2]", "p");
    if (n_list.empty()) throw ValidationError("empty list", "n_list");
    Lemma4Growth out;
    out.r_p = std::numbers::sqrt2 / binomial_norm(p);
    double prior = 0.0;
    for (int n : n_list) {
        if (n < 1) throw ValidationError("orders must be >= 1", "n_list");
        const double R = std::pow(out.r_p, double(n));
        out.n.push_back(n);
        out.R_n.push_back(R);
        out.exceeds_prior.push_back(R > prior * (1.0 + 1e-12) && R > 1.0 + 1e-12);
        prior = std::max(prior, R);
    }
    out.no_uniform_constant = out.r_p > 1.0 + 1e-12;

    auto& r = out.report;
    r.experiment = "lemma4";
    r.parameters["p"] = p;
    r.scalars["r_p"] = out.r_p;
    r.flags["no_uniform_constant"] = out.no_uniform_constant;
    ProbeReport::Table t{{"n_or_N", "p", "value", "exceeds_prior"}, {}};
    for (std::size_t i = 0; i < out.n.size(); ++i) {
        t.rows.push_back({double(out.n[i]), p, out.R_n[i], out.exceeds_prior[i] ? 1.0 : 0.0});
    }
    r.tables["growth"] = std::move(t);
    if (out.no_uniform_constant) r.notes["conclusion"] = "no uniform c exists";
    return out;
}

} // namespace lplab
