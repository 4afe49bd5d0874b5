#pragma once

#include "lplab/fourier_probe.hpp"
#include "lplab/set_model.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lplab {

inline constexpr int config_schema_version = 1;

/// Everything that determines a run. Built from JSON (unknown keys are
/// rejected, each error names its field); `canonical()` is the normalized
/// form that feeds the config hash.
struct RunConfig {
    int schema_version = config_schema_version;
    std::string command;              // construct|thickness|split|chain|probe; empty: inferred

    // set
    std::string family = "cantor";    // cantor|dyadic|sum|generated|theorem3|points|interval|file
    int depth = 6;
    int k_min = 0;
    int k_max = 12;
    std::vector<double> lengths;      // sum
    std::vector<double> points;       // points; also chain search input
    std::vector<double> window;       // interval
    std::string set_path;             // file
    std::string sequence = "dyadic";  // generated: dyadic|geometric|explicit
    double rate = 0.0;                // geometric rate b
    std::vector<double> terms;        // explicit gap lengths
    std::optional<double> tau;        // ratio condition delta_{k+1}/delta_k <= tau
    std::string psi = "powerlog";     // theorem3: power|powerlog
    double psi_parameter = 2.0;
    double psi_delta0 = 0.5;
    int K = 4;

    // analyses
    std::string analysis;             // neighborhood|porosity|boxdim|theorem2
    std::vector<double> deltas;
    std::vector<double> scales;
    std::vector<double> portion;
    int porosity_resolution = 12;
    double tolerance = 0.05;

    // splitting and chains
    double ap_a = 0.0;
    double ap_d = 1.0;
    long ap_N = 16;
    int n = 2;
    std::string chain_mode = "exact";
    double eps = 1e-12;

    // probes
    std::string probe;                // frame|dirichlet|rademacher|khintchine|chain_ratio|lemma4
    double p = 2.0;
    long trials = 100;
    std::size_t M = 1024;
    double freq_scale = 1.0;
    std::vector<long> N_list;
    std::vector<long> k_list;
    long N = 64;
    std::vector<double> coefficients;
    std::vector<int> n_list;
    std::string sign_mode = "auto";

    std::uint64_t seed = 0;

    // output plumbing (not part of the hash)
    std::string out_dir;
    std::string format = "json";
    int threads = 0;

    static RunConfig from_json(const nlohmann::json& j);
    nlohmann::json canonical() const;
    std::string hash() const;         // FNV-1a 64 of canonical().dump(), hex
    std::string resolved_command() const;
};

struct ReportBundle {
    nlohmann::json report;                       // includes "timestamp"
    std::optional<GapSet> set;
    std::map<std::string, std::string> tables;   // file name -> CSV or .dat text
    std::vector<std::pair<std::string, std::string>> summary;
};

/// Pure computation: no files are touched. Throws ValidationError /
/// ReliabilityError.
ReportBundle run(const RunConfig& config);

/// Writes set.json, report.json and (format csv) the tables into out_dir.
/// Returns the written paths.
std::vector<std::string> write_bundle(const ReportBundle& bundle, const RunConfig& config);

std::string summary_table(const ReportBundle& bundle);

nlohmann::json probe_report_json(const ProbeReport& report);

/// Decimal text of a double: shortest round-trip, locale independent.
std::string format_double(double x);

std::string fnv1a_hex(const std::string& text);

} // namespace lplab
