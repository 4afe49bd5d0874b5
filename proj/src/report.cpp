#include "lplab/report.hpp"

#include "lplab/combinatorics.hpp"
#include "lplab/errors.hpp"
#include "lplab/parallel.hpp"
#include "lplab/set_io.hpp"
#include "lplab/thickness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace lplab {

using nlohmann::json;

namespace {

const std::set<std::string> commands{"construct", "thickness", "split", "chain", "probe"};
const std::set<std::string> families{"cantor", "dyadic", "sum", "generated", "theorem3", "points", "interval", "file"};
const std::set<std::string> analyses{"neighborhood", "porosity", "boxdim", "theorem2"};
const std::set<std::string> probes{"frame", "dirichlet", "rademacher", "khintchine", "chain_ratio", "lemma4"};

// Reads typed values out of a config object and remembers which keys it saw.
class Reader {
public:
    explicit Reader(const json& j) : j_(j) {}

    template <class T>
    void get(const std::string& key, T& out) {
        if (!j_.contains(key)) return;
        seen_.insert(key);
        out = convert<T>(j_[key], key);
    }

    template <class T>
    void get(const std::string& key, std::optional<T>& out) {
        if (!j_.contains(key)) return;
        seen_.insert(key);
        if (j_[key].is_null()) {
            out.reset();
            return;
        }
        out = convert<T>(j_[key], key);
    }

    void mark(const std::string& key) { seen_.insert(key); }

    void reject_unknown() const {
        for (const auto& [key, value] : j_.items()) {
            if (!seen_.count(key)) throw ValidationError("unknown configuration key", key);
        }
    }

private:
    template <class T>
    static T convert(const json& v, const std::string& key) {
        if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) throw ValidationError("expected a string", key);
            return v.get<std::string>();
        } else if constexpr (std::is_same_v<T, double>) {
            if (!v.is_number()) throw ValidationError("expected a number", key);
            const double x = v.get<double>();
            if (!std::isfinite(x)) throw ValidationError("non-finite number", key);
            return x;
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
            // nlohmann stores literal non-negative integers as signed unless they overflow
            if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
                throw ValidationError("expected a non-negative integer", key);
            }
            return v.get<std::uint64_t>();
        } else if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer()) throw ValidationError("expected an integer", key);
            const long long x = v.get<long long>();
            if (x < (long long)std::numeric_limits<T>::min() || x > (long long)std::numeric_limits<T>::max()) {
                throw ValidationError("integer out of range", key);
            }
            return T(x);
        } else {
            if (!v.is_array()) throw ValidationError("expected an array", key);
            T out;
            for (std::size_t i = 0; i < v.size(); ++i) {
                out.push_back(convert<typename T::value_type>(v[i], key + "[" + std::to_string(i) + "]"));
            }
            return out;
        }
    }

    const json& j_;
    std::set<std::string> seen_;
};

void require_choice(const std::string& value, const std::set<std::string>& allowed, const std::string& field) {
    if (allowed.count(value)) return;
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    throw ValidationError("unknown value '" + value + "' (expected one of: " + list + ")", field);
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct BuiltSet {
    GapSet set;
    std::optional<GapSequence> sequence;
    std::optional<Theorem3Set> theorem3;
    std::optional<PsiSpec> psi;
};

BuiltSet build_set(const RunConfig& c) {
    BuiltSet b;
    if (c.family == "cantor") {
        b.set = cantor_triadic(c.depth);
    } else if (c.family == "dyadic") {
        b.set = dyadic_set(c.k_min, c.k_max);
    } else if (c.family == "sum") {
        if (c.lengths.empty()) throw ValidationError("sum family needs lengths", "lengths");
        b.set = sum_set(c.lengths);
    } else if (c.family == "generated") {
        if (c.sequence == "dyadic") {
            b.sequence = GapSequence::normalized_geometric(std::numbers::ln2);
        } else if (c.sequence == "geometric") {
            if (!(c.rate > 0.0)) throw ValidationError("geometric sequence needs rate > 0", "rate");
            b.sequence = GapSequence::normalized_geometric(c.rate);
        } else if (c.sequence == "explicit") {
            if (c.terms.empty()) throw ValidationError("explicit sequence needs terms", "terms");
            b.sequence = GapSequence::explicit_terms(c.terms);
        } else {
            throw ValidationError("unknown sequence '" + c.sequence + "'", "sequence");
        }
        b.set = generated_set(*b.sequence, c.depth);
    } else if (c.family == "theorem3") {
        if (c.psi == "power") {
            b.psi = PsiSpec::power(c.psi_parameter, c.psi_delta0);
        } else if (c.psi == "powerlog") {
            b.psi = PsiSpec::powerlog(c.psi_parameter, c.psi_delta0);
        } else {
            throw ValidationError("unknown psi '" + c.psi + "'", "psi");
        }
        b.theorem3 = theorem3_set(*b.psi, c.K);
        b.set = b.theorem3->set;
    } else if (c.family == "points") {
        if (c.points.empty()) throw ValidationError("points family needs points", "points");
        GapSetMeta meta;
        meta.family = "points";
        meta.resolution = 0.0;
        b.set = GapSet::from_points(c.points, 0, meta);
    } else if (c.family == "interval") {
        if (c.window.size() != 2) throw ValidationError("expected [lo, hi]", "window");
        GapSetMeta meta;
        meta.family = "interval";
        meta.resolution = 0.0;
        b.set = GapSet::from_gaps({c.window[0], c.window[1]}, {}, 0, meta);
    } else {
        if (c.set_path.empty()) throw ValidationError("file family needs set_path", "set_path");
        b.set = load_set(c.set_path);
    }
    return b;
}

json interval_json(const Interval& i) { return json::array({i.lo, i.hi}); }

json set_summary(const BuiltSet& b, const RunConfig& c) {
    const GapSet& s = b.set;
    json j{{"family", s.family()},
           {"depth", s.depth()},
           {"window", interval_json(s.window())},
           {"gap_count", s.gaps().size()},
           {"component_count", s.component_count()},
           {"residual", s.residual()},
           {"resolution", s.resolution()},
           {"reliable_delta", s.reliable_delta()},
           {"dropped_gaps", s.dropped_gaps()}};
    if (b.sequence) {
        const auto& q = *b.sequence;
        json seq{{"family", to_string(q.family())},
                 {"terms", q.size()},
                 {"sum", q.sum()},
                 {"max_ratio", q.max_ratio()}};
        if (c.tau) {
            seq["tau"] = *c.tau;
            seq["ratio_condition_holds"] = q.ratio_condition(*c.tau);
        }
        j["sequence"] = std::move(seq);
    }
    if (b.theorem3) {
        const auto& t = *b.theorem3;
        json chains = json::array();
        for (const auto& cert : t.chains) {
            chains.push_back({{"order", cert.order},
                              {"exponents", cert.exponents},
                              {"alpha", cert.alpha},
                              {"beta", cert.beta},
                              {"exact_valid", cert.exact_valid},
                              {"resolved", cert.resolved}});
        }
        std::vector<int> used(t.exponents.begin(),
                              t.exponents.begin() + std::min<std::size_t>(t.exponents.size(), std::size_t(c.K * c.K + c.K)));
        j["theorem3"] = {{"psi", b.psi->describe()},
                         {"psi_replaced", t.psi_replaced},
                         {"limit", t.limit},
                         {"exponents", used},
                         {"points", t.points.size()},
                         {"merged_points", t.merged_points},
                         {"chains", std::move(chains)}};
    }
    return j;
}

std::vector<double> default_deltas(const GapSet& s) {
    const double w = s.window().length() > 0.0 ? s.window().length() : 1.0;
    std::vector<double> d;
    for (int j = 1; j <= 16; ++j) d.push_back(std::ldexp(w, -j));
    return d;
}

std::vector<double> default_scales(const GapSet& s) {
    const double w = s.window().length();
    const double base = s.family() == "cantor" ? 3.0 : 2.0;
    std::vector<double> out;
    if (!(w > 0.0)) {
        for (int j = 1; j <= 12; ++j) out.push_back(std::ldexp(1.0, -j));
        return out;
    }
    const int max_j = s.resolution() > 0.0 ? 30 : 12;
    for (int j = 1; j <= max_j; ++j) {
        const double sc = w * std::pow(base, -double(j));
        if (s.resolution() > 0.0 && sc < s.resolution() * (1.0 - 1e-9)) break;
        out.push_back(sc);
    }
    return out;
}

json fit_json(const ExponentFit& f) {
    return {{"exponent", f.exponent}, {"constant", f.constant}, {"r2", f.r2}, {"points_used", f.points_used()}};
}

class Csv {
public:
    explicit Csv(std::vector<std::string> columns) {
        for (std::size_t i = 0; i < columns.size(); ++i) text_ += (i ? "," : "") + columns[i];
        text_ += '\n';
    }
    template <class... Cells>
    void row(const Cells&... cells) {
        std::size_t i = 0;
        ((text_ += (i++ ? "," : "") + cell(cells)), ...);
        text_ += '\n';
    }
    const std::string& text() const { return text_; }

private:
    static std::string cell(double x) { return format_double(x); }
    static std::string cell(bool b) { return b ? "true" : "false"; }
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
    static std::string cell(long x) { return std::to_string(x); }
    static std::string cell(int x) { return std::to_string(x); }
    static std::string cell(std::size_t x) { return std::to_string(x); }

    std::string text_;
};

std::string two_column(const std::vector<double>& x, const std::vector<double>& y) {
    std::string out;
    for (std::size_t i = 0; i < x.size(); ++i) out += format_double(x[i]) + " " + format_double(y[i]) + "\n";
    return out;
}

// ---------------------------------------------------------------- commands

void run_thickness(const RunConfig& c, const BuiltSet& b, ReportBundle& out, json& result, json& flags) {
    const GapSet& s = b.set;
    const std::string analysis = c.analysis.empty() ? "neighborhood" : c.analysis;
    result["analysis"] = analysis;

    if (analysis == "porosity") {
        const auto est = porosity_estimate(s, c.porosity_resolution);
        result["c_hat"] = est.c_hat;
        result["witness"] = interval_json(est.witness);
        result["scanned"] = est.scanned;
        result["resolution"] = est.resolution;
        flags["estimate_only"] = true;
        out.summary.push_back({"porosity c_hat", format_double(est.c_hat)});
        return;
    }

    if (analysis == "boxdim") {
        const auto scales = c.scales.empty() ? default_scales(s) : c.scales;
        const auto fit = box_counting(s, scales);
        std::vector<double> inv, counts;
        Csv csv({"scale", "count", "reliable"});
        json rows = json::array();
        for (std::size_t i = 0; i < fit.scales.size(); ++i) {
            csv.row(fit.scales[i], fit.counts[i], bool(fit.reliable[i]));
            rows.push_back({{"scale", fit.scales[i]}, {"count", fit.counts[i]}, {"reliable", bool(fit.reliable[i])}});
            if (fit.reliable[i]) {
                inv.push_back(1.0 / fit.scales[i]);
                counts.push_back(double(fit.counts[i]));
            }
        }
        json fj = fit_json(fit_power_law(inv, counts));
        fj["exponent"] = fit.slope;  // identical regression; keep the module's value
        result["fit"] = fj;
        result["slope"] = fit.slope;
        result["rows"] = std::move(rows);
        flags["all_scales_reliable"] = fit.points_used == fit.scales.size();
        out.tables["boxdim.csv"] = csv.text();
        out.tables["boxdim.dat"] = two_column(inv, counts);
        out.summary.push_back({"box dimension", format_double(fit.slope)});
        out.summary.push_back({"scales used", std::to_string(fit.points_used)});
        return;
    }

    const auto deltas = c.deltas.empty() ? default_deltas(s) : c.deltas;
    for (double d : deltas) {
        if (!(d > 0.0)) throw ValidationError("deltas must be positive", "deltas");
    }

    if (analysis == "theorem2") {
        Interval portion = s.window();
        if (!c.portion.empty()) {
            if (c.portion.size() != 2) throw ValidationError("expected [lo, hi]", "portion");
            portion = {c.portion[0], c.portion[1]};
        }
        const auto fit = theorem2_fit(s, portion, deltas, c.p, c.tolerance);
        Csv csv({"delta", "measure", "bound", "reliable"});
        json rows = json::array();
        std::vector<double> xs, ys;
        const double span_pow = std::pow(portion.length(), 2.0 / fit.q);
        for (std::size_t i = 0; i < fit.deltas.size(); ++i) {
            const double bound = fit.c_empirical * span_pow * std::pow(fit.deltas[i], fit.bound_exponent);
            csv.row(fit.deltas[i], fit.measures[i], bound, bool(fit.reliable[i]));
            rows.push_back({{"delta", fit.deltas[i]},
                            {"measure", fit.measures[i]},
                            {"bound", bound},
                            {"reliable", bool(fit.reliable[i])}});
            if (fit.reliable[i]) {
                xs.push_back(fit.deltas[i]);
                ys.push_back(fit.measures[i]);
            }
        }
        result["fit"] = fit_json(fit.fit);
        result["portion"] = interval_json(portion);
        result["p"] = fit.p;
        result["q"] = fit.q;
        result["bound_exponent"] = fit.bound_exponent;
        result["tolerance"] = fit.tolerance;
        result["consistent"] = fit.consistent;
        result["c_empirical"] = fit.c_empirical;
        result["rows"] = std::move(rows);
        flags["all_deltas_reliable"] = xs.size() == fit.deltas.size();
        out.tables["theorem2.csv"] = csv.text();
        out.tables["theorem2.dat"] = two_column(xs, ys);
        out.summary.push_back({"fitted exponent", format_double(fit.fit.exponent)});
        out.summary.push_back({"bound exponent", format_double(fit.bound_exponent)});
        out.summary.push_back({"consistent", fit.consistent ? "yes" : "no"});
        return;
    }

    // neighborhood
    Csv csv({"delta", "measure", "bound", "reliable"});
    json rows = json::array();
    std::vector<double> xs, ys;
    bool bound_holds = true;
    std::string bound_kind = "none";
    if (b.sequence) bound_kind = "gap_lower_bound";
    if (b.theorem3) bound_kind = "psi_upper_bound";
    for (double d : deltas) {
        const double m = neighborhood_measure(s, d);
        const bool ok = d >= s.reliable_delta();
        std::optional<double> bound;
        if (b.sequence) bound = gap_lower_bound(*b.sequence, d);
        if (b.psi && d < b.psi->delta0) bound = (*b.psi)(d);
        if (ok && bound) {
            if (b.sequence && m < *bound) bound_holds = false;
            if (b.theorem3 && m > *bound) bound_holds = false;
        }
        csv.row(d, m, bound ? format_double(*bound) : std::string(), ok);
        rows.push_back({{"delta", d}, {"measure", m}, {"bound", bound ? json(*bound) : json()}, {"reliable", ok}});
        if (ok) {
            xs.push_back(d);
            ys.push_back(m);
        }
    }
    if (xs.empty()) {
        throw ReliabilityError("every delta lies below the reliable limit " + format_double(s.reliable_delta()));
    }
    result["rows"] = std::move(rows);
    result["bound_kind"] = bound_kind;
    if (bound_kind != "none") result["bound_holds"] = bound_holds;
    if (xs.size() >= 2) result["fit"] = fit_json(fit_power_law(xs, ys));
    flags["all_deltas_reliable"] = xs.size() == deltas.size();
    out.tables["neighborhood.csv"] = csv.text();
    out.tables["neighborhood.dat"] = two_column(xs, ys);
    out.summary.push_back({"reliable deltas", std::to_string(xs.size()) + "/" + std::to_string(deltas.size())});
    if (bound_kind != "none") out.summary.push_back({bound_kind, bound_holds ? "holds" : "violated"});
}

void run_split(const RunConfig& c, const BuiltSet& b, ReportBundle& out, json& result, json& flags) {
    const APSpec ap{c.ap_a, c.ap_d, c.ap_N};
    const auto sub = max_splitting_subset(b.set, ap);
    const auto cert = splits(sub.subset, b.set);
    const auto full = splits(ap.points(), b.set);
    const double three_log = 3.0 * std::log2(double(ap.N));
    result["ap"] = {{"a", ap.a}, {"d", ap.d}, {"N", ap.N}};
    result["nu"] = sub.nu;
    result["subset"] = sub.subset;
    result["gaps"] = sub.gaps;
    result["certificate"] = certificate_to_json(cert);
    result["ap_certificate"] = certificate_to_json(full);
    result["three_log2_N"] = three_log;
    if (c.p > 1.0) result["N_pow_2_over_q"] = std::pow(double(ap.N), 2.0 * (c.p - 1.0) / c.p);
    flags["nu_within_3log2N"] = double(sub.nu) <= three_log;
    flags["subset_certificate_valid"] = cert.valid;
    out.summary.push_back({"nu", std::to_string(sub.nu)});
    out.summary.push_back({"3 log2 N", format_double(three_log)});
}

void run_chain(const RunConfig& c, const std::optional<BuiltSet>& b, ReportBundle& out, json& result,
               json& flags) {
    std::vector<double> pts = c.points;
    if (pts.empty() && b) {
        for (const auto& comp : b->set.components()) {
            if (comp.degenerate()) pts.push_back(comp.lo);
        }
    }
    if (pts.empty()) throw ValidationError("chain search needs points (or a set with isolated points)", "points");
    if (c.chain_mode != "exact" && c.chain_mode != "heuristic") {
        throw ValidationError("expected exact or heuristic", "chain_mode");
    }
    const auto mode = c.chain_mode == "exact" ? ChainSearch::Exact : ChainSearch::Heuristic;
    const auto res = find_chain(pts, c.n, mode, c.eps);
    result["mode"] = c.chain_mode;
    result["n"] = c.n;
    result["eps"] = c.eps;
    result["candidates"] = pts.size();
    result["found"] = res.chain.has_value();
    result["exhaustive"] = res.exhaustive;
    if (res.chain) {
        result["chain"] = {{"base", res.chain->base}, {"lengths", res.chain->lengths}, {"points", res.chain->points()}};
    }
    flags["heuristic"] = !res.exhaustive;
    out.summary.push_back({"chain found", res.chain ? "yes" : "no"});
    out.summary.push_back({"search", res.exhaustive ? "exact" : "heuristic (not a proof of absence)"});
}

SignMode sign_mode_of(const std::string& s) {
    if (s == "auto") return SignMode::Auto;
    if (s == "exhaustive") return SignMode::Exhaustive;
    if (s == "montecarlo") return SignMode::MonteCarlo;
    throw ValidationError("expected auto, exhaustive or montecarlo", "sign_mode");
}

void run_probe(const RunConfig& c, const std::optional<BuiltSet>& b, ReportBundle& out, json& result,
               json& flags) {
    const std::string& probe = c.probe;
    result["probe"] = probe;
    Csv csv({"n_or_N", "p", "value", "stderr", "seed"});

    if (probe == "frame") {
        const auto fp = frame_probe(b->set, c.p, c.trials, c.M, c.seed, c.freq_scale);
        result["report"] = probe_report_json(fp.report);
        for (std::size_t t = 0; t < fp.random_ratios.size(); ++t) {
            csv.row(t, c.p, fp.random_ratios[t], "", c.seed + t);
        }
        flags["empirical_only"] = true;
        out.summary.push_back({"c1_hat", format_double(fp.c1_hat)});
        out.summary.push_back({"c2_hat", format_double(fp.c2_hat)});
    } else if (probe == "dirichlet") {
        std::vector<long> Ns = c.N_list;
        if (Ns.empty()) {
            for (int m = 4; m <= 12; ++m) Ns.push_back(1L << m);
        }
        const auto ds = dirichlet_scaling(c.p, Ns);
        result["report"] = probe_report_json(ds.report());
        result["fit"] = fit_json(ds.fit);
        std::vector<double> xs(ds.N.begin(), ds.N.end());
        for (std::size_t i = 0; i < ds.N.size(); ++i) csv.row(ds.N[i], c.p, ds.norms[i], "", c.seed);
        out.tables["dirichlet.dat"] = two_column(xs, ds.norms);
        out.summary.push_back({"fitted exponent", format_double(ds.fit.exponent)});
        out.summary.push_back({"target 1/q", format_double(ds.target)});
    } else if (probe == "rademacher") {
        std::vector<long> ks = c.k_list;
        if (ks.empty()) {
            for (long k = 1; k <= c.N; k *= 2) ks.push_back(k);
        }
        const auto re = rademacher_experiment(ks, c.N, c.p, sign_mode_of(c.sign_mode), c.trials, c.seed);
        result["report"] = probe_report_json(re.report);
        const double se = re.mean_pth_power > 0.0
                              ? re.average_norm * re.stderr_pth_power / (c.p * re.mean_pth_power)
                              : 0.0;
        csv.row(c.N, c.p, re.average_norm, se, c.seed);
        flags["exhaustive"] = re.exhaustive;
        out.summary.push_back({"average norm", format_double(re.average_norm)});
        out.summary.push_back({"khintchine lower", format_double(re.khintchine_lower)});
        out.summary.push_back({"dirichlet norm", format_double(re.dirichlet_norm)});
    } else if (probe == "khintchine") {
        const std::vector<double> coeffs = c.coefficients.empty() ? std::vector<double>(10, 1.0) : c.coefficients;
        const auto kr = khintchine_ratio(coeffs, c.p, sign_mode_of(c.sign_mode), c.trials, c.seed);
        ProbeReport r;
        r.experiment = "khintchine";
        r.seed = c.seed;
        r.trials = kr.exhaustive ? 0 : c.trials;
        r.parameters["p"] = c.p;
        r.parameters["n"] = double(coeffs.size());
        r.scalars["ratio"] = kr.ratio;
        r.scalars["stderr_ratio"] = kr.stderr_ratio;
        r.scalars["patterns"] = double(kr.patterns);
        r.scalars["sharp_constant"] = khintchine_constant(c.p);
        r.flags["exhaustive"] = kr.exhaustive;
        result["report"] = probe_report_json(r);
        csv.row(coeffs.size(), c.p, kr.ratio, kr.stderr_ratio, c.seed);
        flags["exhaustive"] = kr.exhaustive;
        out.summary.push_back({"ratio", format_double(kr.ratio)});
    } else if (probe == "chain_ratio") {
        std::vector<int> ns = c.n_list;
        if (ns.empty()) {
            for (int k = 1; k <= c.n; ++k) ns.push_back(k);
        }
        json rows = json::array();
        for (int k : ns) {
            const auto cr = chain_ratio(k, c.p);
            json row{{"n", k}, {"one_dim_norm", cr.one_dim_norm}, {"r_p", cr.r_p}, {"R_n", cr.R_n}};
            if (cr.grid_norm) {
                row["grid_norm"] = *cr.grid_norm;
                row["factorized_norm"] = *cr.factorized_norm;
            }
            rows.push_back(std::move(row));
            csv.row(k, c.p, cr.R_n, "", c.seed);
        }
        result["rows"] = std::move(rows);
        out.summary.push_back({"r_p", format_double(std::numbers::sqrt2 / binomial_norm(c.p))});
    } else {  // lemma4
        std::vector<int> ns = c.n_list;
        if (ns.empty()) {
            for (int k = 1; k <= 20; ++k) ns.push_back(k);
        }
        const auto lg = lemma4_growth(ns, c.p);
        result["report"] = probe_report_json(lg.report);
        std::vector<double> xs(lg.n.begin(), lg.n.end());
        for (std::size_t i = 0; i < lg.n.size(); ++i) csv.row(lg.n[i], c.p, lg.R_n[i], "", c.seed);
        out.tables["lemma4.dat"] = two_column(xs, lg.R_n);
        flags["no_uniform_constant"] = lg.no_uniform_constant;
        out.summary.push_back({"r_p", format_double(lg.r_p)});
        out.summary.push_back({"no uniform constant", lg.no_uniform_constant ? "yes" : "no"});
    }
    out.tables[probe + ".csv"] = csv.text();
}

} // namespace

// ---------------------------------------------------------------- config

RunConfig RunConfig::from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("configuration must be a JSON object", "config");
    RunConfig c;
    Reader r(j);
    r.get("schema_version", c.schema_version);
    if (c.schema_version != config_schema_version) {
        throw ValidationError("schema mismatch: expected " + std::to_string(config_schema_version) + ", found " +
                                  std::to_string(c.schema_version),
                              "schema_version");
    }
    r.get("command", c.command);
    r.get("family", c.family);
    r.get("depth", c.depth);
    r.get("k_min", c.k_min);
    r.get("k_max", c.k_max);
    r.get("lengths", c.lengths);
    r.get("points", c.points);
    r.get("window", c.window);
    r.get("set_path", c.set_path);
    r.get("sequence", c.sequence);
    r.get("rate", c.rate);
    r.get("terms", c.terms);
    r.get("tau", c.tau);
    r.get("psi", c.psi);
    r.get("psi_parameter", c.psi_parameter);
    r.get("psi_delta0", c.psi_delta0);
    r.get("K", c.K);
    r.get("analysis", c.analysis);
    r.get("deltas", c.deltas);
    r.get("scales", c.scales);
    r.get("portion", c.portion);
    r.get("porosity_resolution", c.porosity_resolution);
    r.get("tolerance", c.tolerance);
    if (j.contains("ap")) {
        r.mark("ap");
        const json& ap = j["ap"];
        if (!ap.is_object()) throw ValidationError("expected an object {a, d, N}", "ap");
        Reader ar(ap);
        ar.get("a", c.ap_a);
        ar.get("d", c.ap_d);
        ar.get("N", c.ap_N);
        try {
            ar.reject_unknown();
        } catch (const ValidationError& e) {
            throw ValidationError("unknown key", "ap." + e.field());
        }
    }
    r.get("n", c.n);
    r.get("chain_mode", c.chain_mode);
    r.get("eps", c.eps);
    r.get("probe", c.probe);
    r.get("p", c.p);
    r.get("trials", c.trials);
    r.get("M", c.M);
    r.get("freq_scale", c.freq_scale);
    r.get("N_list", c.N_list);
    r.get("k_list", c.k_list);
    r.get("N", c.N);
    r.get("coefficients", c.coefficients);
    r.get("n_list", c.n_list);
    r.get("sign_mode", c.sign_mode);
    r.get("seed", c.seed);
    r.get("out_dir", c.out_dir);
    r.get("format", c.format);
    r.get("threads", c.threads);
    r.reject_unknown();

    if (!c.command.empty()) require_choice(c.command, commands, "command");
    require_choice(c.family, families, "family");
    if (c.depth < 0) throw ValidationError("must be >= 0", "depth");
    if (c.K < 1) throw ValidationError("must be >= 1", "K");
    if (c.n < 1) throw ValidationError("must be >= 1", "n");
    if (!c.analysis.empty()) require_choice(c.analysis, analyses, "analysis");
    if (!c.probe.empty()) require_choice(c.probe, probes, "probe");
    if (!(c.p >= 1.0)) throw ValidationError("must be >= 1", "p");
    if (c.trials < 1) throw ValidationError("must be >= 1", "trials");
    if (c.M < 4 || (c.M & (c.M - 1)) != 0) throw ValidationError("must be a power of two >= 4", "M");
    if (!(c.freq_scale > 0.0)) throw ValidationError("must be positive", "freq_scale");
    if (c.N < 1) throw ValidationError("must be >= 1", "N");
    if (c.ap_N < 1) throw ValidationError("must be >= 1", "ap.N");
    if (c.porosity_resolution < 1) throw ValidationError("must be >= 1", "porosity_resolution");
    if (!(c.eps >= 0.0)) throw ValidationError("must be >= 0", "eps");
    if (c.tau && !(*c.tau > 0.0)) throw ValidationError("must be positive", "tau");
    for (double d : c.deltas) {
        if (!(d > 0.0)) throw ValidationError("must be positive", "deltas");
    }
    for (double x : c.scales) {
        if (!(x > 0.0)) throw ValidationError("must be positive", "scales");
    }
    if (!c.portion.empty() && (c.portion.size() != 2 || !(c.portion[0] < c.portion[1]))) {
        throw ValidationError("expected [lo, hi] with lo < hi", "portion");
    }
    if (c.format != "json" && c.format != "csv") throw ValidationError("expected json or csv", "format");
    if (c.threads < 0) throw ValidationError("must be >= 0", "threads");
    if (c.chain_mode != "exact" && c.chain_mode != "heuristic") {
        throw ValidationError("expected exact or heuristic", "chain_mode");
    }
    sign_mode_of(c.sign_mode);
    const std::string cmd = c.resolved_command();
    if (cmd == "probe" && c.probe.empty()) throw ValidationError("probe command needs a probe", "probe");
    return c;
}

json RunConfig::canonical() const {
    return {
        {"schema_version", schema_version},
        {"command", resolved_command()},
        {"family", family},
        {"depth", depth},
        {"k_min", k_min},
        {"k_max", k_max},
        {"lengths", lengths},
        {"points", points},
        {"window", window},
        {"set_path", set_path},
        {"sequence", sequence},
        {"rate", rate},
        {"terms", terms},
        {"tau", tau ? json(*tau) : json()},
        {"psi", psi},
        {"psi_parameter", psi_parameter},
        {"psi_delta0", psi_delta0},
        {"K", K},
        {"analysis", analysis},
        {"deltas", deltas},
        {"scales", scales},
        {"portion", portion},
        {"porosity_resolution", porosity_resolution},
        {"tolerance", tolerance},
        {"ap", {{"a", ap_a}, {"d", ap_d}, {"N", ap_N}}},
        {"n", n},
        {"chain_mode", chain_mode},
        {"eps", eps},
        {"probe", probe},
        {"p", p},
        {"trials", trials},
        {"M", M},
        {"freq_scale", freq_scale},
        {"N_list", N_list},
        {"k_list", k_list},
        {"N", N},
        {"coefficients", coefficients},
        {"n_list", n_list},
        {"sign_mode", sign_mode},
        {"seed", seed},
    };
}

std::string RunConfig::hash() const { return fnv1a_hex(canonical().dump()); }

std::string RunConfig::resolved_command() const {
    if (!command.empty()) return command;
    if (!probe.empty()) return "probe";
    if (!analysis.empty()) return "thickness";
    return "construct";
}

// ---------------------------------------------------------------- run

ReportBundle run(const RunConfig& config) {
    if (config.threads > 0) set_thread_count(std::size_t(config.threads));
    const std::string cmd = config.resolved_command();

    const bool needs_set = cmd != "probe" || config.probe == "frame";
    const bool chain_from_points = cmd == "chain" && !config.points.empty() && config.family != "points";
    std::optional<BuiltSet> built;
    if (needs_set && !chain_from_points) built = build_set(config);

    ReportBundle out;
    json result = json::object();
    json flags = json::object();

    if (cmd == "construct") {
        result["points"] = built->set.component_count();
        out.summary.push_back({"components", std::to_string(built->set.component_count())});
    } else if (cmd == "thickness") {
        run_thickness(config, *built, out, result, flags);
    } else if (cmd == "split") {
        run_split(config, *built, out, result, flags);
    } else if (cmd == "chain") {
        run_chain(config, built, out, result, flags);
    } else {
        if (config.probe == "frame" && !built) throw ValidationError("frame probe needs a set", "family");
        run_probe(config, built, out, result, flags);
    }

    if (built) {
        const GapSet& s = built->set;
        flags["truncated"] = s.resolution() > 0.0 || s.residual() > 0.0;
        out.set = s;
        out.summary.insert(out.summary.begin(),
                           {{"family", s.family()},
                            {"residual", format_double(s.residual())},
                            {"reliable delta", format_double(s.reliable_delta())}});
    }
    out.summary.insert(out.summary.begin(), {"command", cmd});

    out.report = {
        {"schema_version", config_schema_version},
        {"command", cmd},
        {"config", config.canonical()},
        {"config_hash", config.hash()},
        {"seed", config.seed},
        {"residual", built ? json(built->set.residual()) : json()},
        {"set", built ? set_summary(*built, config) : json()},
        {"reliability", std::move(flags)},
        {"result", std::move(result)},
        {"timestamp", utc_timestamp()},
    };
    return out;
}

std::vector<std::string> write_bundle(const ReportBundle& bundle, const RunConfig& config) {
    namespace fs = std::filesystem;
    const fs::path dir = config.out_dir.empty() ? fs::path(".") : fs::path(config.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ValidationError("cannot create " + dir.string() + ": " + ec.message(), "out_dir");

    std::vector<std::string> written;
    auto write = [&](const std::string& name, const std::string& text) {
        const fs::path p = dir / name;
        std::ofstream f(p);
        if (!f) throw ValidationError("cannot write " + p.string(), "out_dir");
        f << text;
        written.push_back(p.string());
    };
    if (bundle.set) {
        save_set(*bundle.set, (dir / "set.json").string());
        written.push_back((dir / "set.json").string());
    }
    write("report.json", bundle.report.dump(2) + "\n");
    if (config.format == "csv") {
        for (const auto& [name, text] : bundle.tables) write(name, text);
    }
    return written;
}

std::string summary_table(const ReportBundle& bundle) {
    std::size_t width = 0;
    for (const auto& [k, v] : bundle.summary) width = std::max(width, k.size());
    std::string out;
    for (const auto& [k, v] : bundle.summary) out += k + std::string(width - k.size() + 2, ' ') + v + "\n";
    return out;
}

json probe_report_json(const ProbeReport& r) {
    json tables = json::object();
    for (const auto& [name, t] : r.tables) tables[name] = {{"columns", t.columns}, {"rows", t.rows}};
    return {{"experiment", r.experiment},
            {"seed", r.seed},
            {"trials", r.trials},
            {"parameters", r.parameters},
            {"scalars", r.scalars},
            {"flags", r.flags},
            {"notes", r.notes},
            {"tables", std::move(tables)}};
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace lplab
