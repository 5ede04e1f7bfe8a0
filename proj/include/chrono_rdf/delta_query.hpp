#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chrono_rdf/provenance.hpp"
#include "chrono_rdf/sources.hpp"
#include "chrono_rdf/timestamp.hpp"
#include "chrono_rdf/version_query.hpp"

namespace chrono_rdf {

enum class ChangeKind { kCreated, kModified, kDeleted };

std::string_view change_kind_name(ChangeKind kind);

struct ChangeRecord {
  std::string entity;
  std::string snapshot;
  Timestamp time;
  std::optional<std::string> description;
  std::optional<std::string> attributed_to;
  DeltaPair delta;
  ChangeKind kind = ChangeKind::kModified;
};

struct ChangeReport {
  // Ordered by (time, entity, snapshot).
  std::vector<ChangeRecord> records;
  std::set<std::string> relevant_entities;
  ExplicationStats stats;
};

// Change carried by the snapshot of `entity` generated at `snapshot_time`:
// the entity-scoped inserts/deletes of its update, or the whole first
// version for the creation snapshot. `present` holds the entity's current
// quads. Throws Error(kNoSuchSnapshot).
DeltaPair get_delta(const std::string& entity, Timestamp snapshot_time,
                    const EntityHistory& history, const GraphSet& present);

// True when a quad of the delta has one of `properties` as predicate; any
// non-empty delta touches the empty set.
bool touches(const Delta& delta, const std::set<std::string>& properties);

namespace delta_query {

// Records for the in-interval modifications of the query's relevant
// entities whose delta touches `changed_properties`.
ChangeReport run(const std::string& query_text, const std::set<std::string>& changed_properties,
                 const TimeInterval& interval, const Context& ctx);
ChangeReport run(const ParsedQuery& query, const std::set<std::string>& changed_properties,
                 const TimeInterval& interval, const Context& ctx);

}  // namespace delta_query

}  // namespace chrono_rdf
