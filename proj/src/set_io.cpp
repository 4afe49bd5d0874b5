#include "lplab/set_io.hpp"

#include "lplab/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace lplab {

using nlohmann::json;

namespace {

double finite_number(const json& v, const std::string& field) {
    if (!v.is_number()) throw ValidationError("expected a number", field);
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ValidationError("non-finite number", field);
    return x;
}

Interval pair_of(const json& v, const std::string& field) {
    if (!v.is_array() || v.size() != 2) throw ValidationError("expected [lo, hi]", field);
    return {finite_number(v[0], field), finite_number(v[1], field)};
}

} // namespace

json set_to_json(const GapSet& set) {
    json gaps = json::array();
    for (const auto& g : set.gaps()) gaps.push_back({g.lo, g.hi});
    return {
        {"window", {set.window().lo, set.window().hi}},
        {"gaps", std::move(gaps)},
        {"depth", set.depth()},
        {"meta",
         {{"schema_version", set_schema_version},
          {"family", set.family()},
          {"resolution", set.resolution()},
          {"residual", set.residual()},
          {"dropped_gaps", set.dropped_gaps()}}},
    };
}

GapSet set_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("expected a JSON object", "set");
    const json meta = j.value("meta", json::object());
    if (!meta.is_object()) throw ValidationError("expected an object", "meta");
    if (!meta.contains("schema_version")) {
        throw ValidationError("schema mismatch: expected schema_version " + std::to_string(set_schema_version) +
                                  ", found none",
                              "meta.schema_version");
    }
    const json& version = meta["schema_version"];
    if (!version.is_number_integer() || version.get<long>() != set_schema_version) {
        throw ValidationError("schema mismatch: expected schema_version " + std::to_string(set_schema_version) +
                                  ", found " + version.dump(),
                              "meta.schema_version");
    }
    if (!j.contains("window")) throw ValidationError("missing", "window");
    if (!j.contains("gaps") || !j["gaps"].is_array()) throw ValidationError("missing or not an array", "gaps");

    const Interval window = pair_of(j["window"], "window");
    std::vector<Interval> gaps;
    gaps.reserve(j["gaps"].size());
    for (std::size_t i = 0; i < j["gaps"].size(); ++i) {
        gaps.push_back(pair_of(j["gaps"][i], "gaps[" + std::to_string(i) + "]"));
    }
    int depth = 0;
    if (j.contains("depth")) {
        if (!j["depth"].is_number_integer()) throw ValidationError("expected an integer", "depth");
        depth = j["depth"].get<int>();
        if (depth < 0) throw ValidationError("must be >= 0", "depth");
    }

    GapSetMeta m;
    if (meta.contains("family")) {
        if (!meta["family"].is_string()) throw ValidationError("expected a string", "meta.family");
        m.family = meta["family"].get<std::string>();
    }
    if (meta.contains("resolution")) m.resolution = finite_number(meta["resolution"], "meta.resolution");
    if (meta.contains("dropped_gaps")) {
        if (!meta["dropped_gaps"].is_number_unsigned()) {
            throw ValidationError("expected a non-negative integer", "meta.dropped_gaps");
        }
        m.dropped_gaps = meta["dropped_gaps"].get<std::size_t>();
    }
    return GapSet::from_gaps(window, std::move(gaps), depth, m);
}

void save_set(const GapSet& set, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path, "path");
    out << set_to_json(set).dump(2) << '\n';
    if (!out) throw ValidationError("write failed for " + path, "path");
}

GapSet load_set(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path, "path");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(path + ": " + e.what(), "path");
    }
    return set_from_json(j);
}

json certificate_to_json(const SplittingCertificate& cert) {
    json assignments = json::array();
    for (std::size_t i = 0; i < cert.points.size(); ++i) {
        assignments.push_back({cert.points[i], cert.gap_index[i]});
    }
    json j{{"valid", cert.valid}, {"assignments", std::move(assignments)}};
    if (!cert.valid) {
        j["first_offender"] = cert.first_offender;
        j["reason"] = cert.reason;
    }
    return j;
}

} // namespace lplab
