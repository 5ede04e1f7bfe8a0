#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chrono_rdf/delta_query.hpp"
#include "chrono_rdf/materializer.hpp"
#include "chrono_rdf/version_query.hpp"

namespace chrono_rdf {

// Documents are {"mode", "generated_at", "results", ...}. generated_at is the
// newest snapshot time among the entities involved (null when none), so
// identical inputs give identical documents.
nlohmann::json materialization_document(const std::string& entity,
                                        const std::vector<VersionedGraph>& versions,
                                        const std::vector<Snapshot>& other_snapshots,
                                        std::optional<Timestamp> generated_at);

nlohmann::json version_query_document(const version_query::Result& result,
                                      std::optional<Timestamp> generated_at);

nlohmann::json delta_query_document(const ChangeReport& report,
                                    std::optional<Timestamp> generated_at);

nlohmann::json error_document(const std::string& code, const std::string& message);

// Newest snapshot time over the histories of `entities`.
std::optional<Timestamp> newest_snapshot(const std::set<std::string>& entities,
                                         const Context& ctx);

// Pretty JSON with sorted keys and a trailing newline.
std::string dump_document(const nlohmann::json& doc);

}  // namespace chrono_rdf
