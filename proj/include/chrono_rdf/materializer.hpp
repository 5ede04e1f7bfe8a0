#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "chrono_rdf/provenance.hpp"
#include "chrono_rdf/rdf.hpp"
#include "chrono_rdf/timestamp.hpp"

namespace chrono_rdf {

// One reconstructed state of an entity, labelled with the snapshot that
// produced it.
struct VersionedGraph {
  std::string entity;
  Snapshot snapshot;
  GraphSet graphs;
  // False iff this is the live state.
  bool reconstructed = false;
};

// Counts inverse-delta applications.
struct MaterializeStats {
  std::size_t delta_applications = 0;
};

// All quads of `data` whose subject is `entity`. Blank labels are scoped to
// the entity the same way delta blank labels are.
GraphSet current_graph(const std::string& entity, const GraphSet& data);

struct Materialization {
  VersionedGraph version;
  // Every snapshot other than the materialized one, oldest first.
  std::vector<Snapshot> other_snapshots;
};

// State of `entity` at `time`: the snapshot with the greatest
// generated_at <= time, reached by applying the inverted updates of all later
// snapshots, newest first, to the current graph. Throws BeforeCreation.
Materialization materialize_at(const std::string& entity, Timestamp time,
                               const GraphSet& data, const EntityHistory& history,
                               MaterializeStats* stats = nullptr);

// Versions whose snapshot time lies in `interval`, oldest first. Each version
// is derived from its successor with one inverse delta, so rebuilding a
// history of n snapshots costs n - 1 applications.
std::vector<VersionedGraph> materialize_all(const std::string& entity,
                                            const GraphSet& data,
                                            const EntityHistory& history,
                                            const TimeInterval& interval,
                                            MaterializeStats* stats = nullptr);

// Like materialize_all, plus the version already in effect at interval.start
// (when one exists and was generated before it).
std::vector<VersionedGraph> materialize_span(const std::string& entity,
                                             const GraphSet& data,
                                             const EntityHistory& history,
                                             const TimeInterval& interval,
                                             MaterializeStats* stats = nullptr);

}  // namespace chrono_rdf
