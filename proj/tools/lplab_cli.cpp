// lplab: construct gap sets, measure their thickness, search for splitting
// configurations and run Fourier probes. Every run writes report.json (and
// set.json when a set is involved) into --out-dir.
//
// Exit codes: 0 success, 2 invalid input, 3 numerically unreliable request,
// 1 anything else.

#include "lplab/errors.hpp"
#include "lplab/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

struct Flags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::string> format;
    std::optional<std::string> family;
    std::optional<int> depth;
    std::optional<std::string> analysis;
    std::optional<std::string> probe;
    std::optional<double> p;
    std::optional<long> trials;
    std::optional<int> n;
    std::optional<int> threads;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config_path, "JSON run configuration (its keys override flags)");
    cmd->add_option("--seed", f.seed, "Root seed for all randomness");
    cmd->add_option("--out-dir", f.out_dir, "Directory for set.json, report.json and tables");
    cmd->add_option("--format", f.format, "Table output: json or csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--family", f.family, "cantor|dyadic|sum|generated|theorem3|points|interval|file");
    cmd->add_option("--depth", f.depth, "Construction depth");
    cmd->add_option("--threads", f.threads, "Worker threads (default: LP_LAB_THREADS or all cores)");
}

nlohmann::json flags_json(const Flags& f) {
    nlohmann::json j = nlohmann::json::object();
    if (f.seed) j["seed"] = *f.seed;
    if (f.out_dir) j["out_dir"] = *f.out_dir;
    if (f.format) j["format"] = *f.format;
    if (f.family) j["family"] = *f.family;
    if (f.depth) j["depth"] = *f.depth;
    if (f.analysis) j["analysis"] = *f.analysis;
    if (f.probe) j["probe"] = *f.probe;
    if (f.p) j["p"] = *f.p;
    if (f.trials) j["trials"] = *f.trials;
    if (f.n) j["n"] = *f.n;
    if (f.threads) j["threads"] = *f.threads;
    return j;
}

nlohmann::json read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw lplab::ValidationError("cannot open " + path, "config");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw lplab::ValidationError(path + ": " + e.what(), "config");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lplab: gap sets, thickness, splitting and Fourier probes"};
    app.require_subcommand(1);
    Flags f;

    auto* construct = app.add_subcommand("construct", "Build a gap set and write set.json");
    auto* thickness = app.add_subcommand("thickness", "Neighbourhood measures, porosity, box dimension, exponent fits");
    auto* split = app.add_subcommand("split", "Maximal splitting subset of an arithmetic progression");
    auto* chain = app.add_subcommand("chain", "Search for n-chains");
    auto* probe = app.add_subcommand("probe", "Fourier probes (frame, dirichlet, rademacher, khintchine, ...)");
    auto* report = app.add_subcommand("report", "Run the command described by --config");
    for (auto* cmd : {construct, thickness, split, chain, probe, report}) add_common(cmd, f);
    thickness->add_option("--analysis", f.analysis, "neighborhood|porosity|boxdim|theorem2");
    chain->add_option("--n", f.n, "Chain order");
    probe->add_option("--probe", f.probe, "frame|dirichlet|rademacher|khintchine|chain_ratio|lemma4");
    probe->add_option("--p", f.p, "Exponent p");
    probe->add_option("--trials", f.trials, "Random trials");
    thickness->add_option("--p", f.p, "Exponent p for theorem2 fits");
    report->get_option("--config")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        nlohmann::json j = flags_json(f);
        const std::string sub = app.get_subcommands().front()->get_name();
        if (sub != "report") j["command"] = sub;
        if (!f.config_path.empty()) {
            const nlohmann::json file = read_config(f.config_path);
            if (!file.is_object()) throw lplab::ValidationError("configuration must be a JSON object", "config");
            j.update(file);
        }
        if (!j.contains("out_dir")) j["out_dir"] = "lplab_out";

        const auto config = lplab::RunConfig::from_json(j);
        const auto bundle = lplab::run(config);
        const auto written = lplab::write_bundle(bundle, config);
        std::cout << lplab::summary_table(bundle);
        std::cout << "config hash  " << config.hash() << "\n";
        for (const auto& p : written) std::cout << "wrote " << p << "\n";
        return 0;
    } catch (const lplab::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const lplab::ReliabilityError& e) {
        std::cerr << "unreliable: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
