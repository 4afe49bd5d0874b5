#pragma once

#include "lplab/combinatorics.hpp"
#include "lplab/set_model.hpp"

#include <json.hpp>

#include <string>

namespace lplab {

inline constexpr int set_schema_version = 1;

/// {"window":[x0,x1], "gaps":[[a,b],...], "depth":d, "meta":{...}}. Doubles
/// are written in shortest round-trip form, so load(save(S)) == S bit-exactly.
nlohmann::json set_to_json(const GapSet& set);

/// Throws ValidationError on schema mismatch, non-finite numbers, malformed
/// entries, or an invalid gap layout (e.g. overlapping gaps).
GapSet set_from_json(const nlohmann::json& j);

void save_set(const GapSet& set, const std::string& path);
GapSet load_set(const std::string& path);

/// {"valid":bool, "assignments":[[point,gap_index],...]}.
nlohmann::json certificate_to_json(const SplittingCertificate& cert);

} // namespace lplab
