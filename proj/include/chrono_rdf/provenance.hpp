#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chrono_rdf/rdf.hpp"
#include "chrono_rdf/timestamp.hpp"
#include "chrono_rdf/update.hpp"

namespace chrono_rdf {

namespace vocab {
inline constexpr std::string_view kProvEntity = "http://www.w3.org/ns/prov#Entity";
inline constexpr std::string_view kSpecializationOf =
    "http://www.w3.org/ns/prov#specializationOf";
inline constexpr std::string_view kGeneratedAtTime =
    "http://www.w3.org/ns/prov#generatedAtTime";
inline constexpr std::string_view kInvalidatedAtTime =
    "http://www.w3.org/ns/prov#invalidatedAtTime";
inline constexpr std::string_view kWasAttributedTo =
    "http://www.w3.org/ns/prov#wasAttributedTo";
inline constexpr std::string_view kHadPrimarySource =
    "http://www.w3.org/ns/prov#hadPrimarySource";
// Alternate spelling, accepted as a synonym on load.
inline constexpr std::string_view kHasPrimarySource =
    "http://www.w3.org/ns/prov#hasPrimarySource";
inline constexpr std::string_view kWasDerivedFrom =
    "http://www.w3.org/ns/prov#wasDerivedFrom";
inline constexpr std::string_view kDescription = "http://purl.org/dc/terms/description";
inline constexpr std::string_view kHasUpdateQuery =
    "https://w3id.org/oc/ontology/hasUpdateQuery";
}  // namespace vocab

struct Snapshot {
  std::string id;
  std::string entity;
  Timestamp generated_at;
  std::optional<Timestamp> invalidated_at;
  std::optional<std::string> attributed_to;
  std::optional<std::string> primary_source;
  std::optional<std::string> derived_from;
  std::optional<std::string> description;
  // Absent on the creation snapshot.
  std::optional<Delta> update;

  bool is_creation() const { return !update.has_value(); }
};

// The snapshot chain of one entity, oldest first.
struct EntityHistory {
  std::string entity;
  std::vector<Snapshot> snapshots;

  // Index of the snapshot with the greatest generated_at <= t.
  std::optional<std::size_t> index_at(Timestamp t) const;
  // Index of the snapshot generated exactly at t.
  std::optional<std::size_t> index_of_time(Timestamp t) const;
  // SHA-256 over the ordered snapshot IRIs and update strings.
  std::string fingerprint() const;
};

struct DeltaPair {
  GraphSet added;
  GraphSet removed;
};

// Every entity IRI that is the target of some prov:specializationOf.
std::vector<std::string> history_entities(const GraphSet& provenance);

// Snapshot IRIs of `entity` found via prov:specializationOf.
std::vector<std::string> snapshot_ids(const std::string& entity,
                                      const GraphSet& provenance);

// Throws NoHistory, BrokenChain, or BadDelta (wrapping update parse errors).
EntityHistory load_history(const std::string& entity, const GraphSet& provenance);
// Same, for a known list of snapshot IRIs.
EntityHistory load_history(const std::string& entity,
                           const std::vector<std::string>& snapshot_iris,
                           const GraphSet& provenance);

// Delta-local blank labels are prefixed with a digest of the entity IRI so
// labels are stable along one entity's chain and distinct across entities.
std::string scope_blank_label(std::string_view entity, std::string_view label);
Delta scope_blank_nodes(Delta delta, std::string_view entity);
GraphSet scope_blank_nodes(const GraphSet& graph, std::string_view entity);

// Keeps quads whose subject is `entity` or a blank node.
Delta entity_scoped(const Delta& delta, const Term& entity);

Delta invert(const Delta& delta);

// Net effect of applying `deltas` in order: for each quad only its last
// action survives.
Delta compose(const std::vector<Delta>& deltas);

enum class GraphMatching {
  kExact,   // deletes match quads exactly
  kTriple,  // deletes remove the triple from every graph
};

// (graphs \ deletes) U inserts: deletes first, then inserts.
GraphSet apply(const Delta& delta, GraphSet graphs,
               GraphMatching matching = GraphMatching::kExact);

// Canonical N-Quads rendering of a delta's deletes and inserts; the text that
// textual delta search runs against.
std::string delta_search_text(const Delta& delta);

}  // namespace chrono_rdf
