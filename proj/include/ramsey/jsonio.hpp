#pragma once

// JSON-lines records for witnesses and reports. Big values serialize as
// int64 when they fit and as decimal strings otherwise; emission order is
// fixed so identical results give byte-identical records.

#include <string>

#include <json.hpp>

#include "ramsey/witness.hpp"

namespace ramsey {

nlohmann::json int_to_json(const Int& v);
Int int_from_json(const nlohmann::json& j);

nlohmann::json witness_to_json(const Witness& w);
Witness witness_from_json(const nlohmann::json& j);

/// FNV-1a digest of a canonical parameter string.
std::string params_digest(const std::string& canonical);

/// One result line: {"op": .., "params": .., ..payload.., "elapsed_ms": ..,
/// "verified": ..}. elapsed_ms is zeroed when stable is set (reproducibility
/// comparisons exclude timings).
std::string record_line(const std::string& op, const std::string& digest,
                        nlohmann::json payload, double elapsed_ms, bool stable);

}  // namespace ramsey
