#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chrono_rdf/cache.hpp"
#include "chrono_rdf/materializer.hpp"
#include "chrono_rdf/sources.hpp"
#include "chrono_rdf/sparql.hpp"
#include "chrono_rdf/timestamp.hpp"

namespace chrono_rdf {

struct QueryPlan {
  std::vector<TriplePattern> joined;
  std::vector<TriplePattern> isolated;
  // Subject IRIs appearing in the query.
  std::set<std::string> seed_iris;
  // Ground predicate/object terms, parallel to `isolated`.
  std::vector<std::vector<Term>> known_terms_per_isolated;
};

// A pattern is joined when its subject is an IRI or its subject variable is
// connected, through variables shared by patterns, to a pattern with an IRI
// subject. Throws Error(kUnboundedQuery) when isolated patterns exist and none
// carries a ground term.
QueryPlan classify(const ParsedQuery& query);

// Snapshots whose delta mentions the N-Triples form of every term.
std::set<DeltaHit> search_deltas(const std::vector<Term>& known_terms, const Context& ctx);

// Reconstructed states of one entity. An entity without provenance has a
// single untimed state that holds at every time.
struct EntityStates {
  std::string entity;
  std::vector<VersionedGraph> versions;
  std::optional<GraphSet> untimed;
};

struct ExplicationStats {
  MaterializeCounters counters;
  // Snapshots spanned by the reconstructions: from the oldest version needed
  // up to the present, per entity. Delta queries add the in-interval deltas
  // they read for entities they did not reconstruct.
  std::size_t snapshots_involved = 0;
};

struct Explication {
  std::set<std::string> entities;
  // Materialized entities; isolated-only entities are absent when
  // materialize_isolated is false.
  std::map<std::string, EntityStates> states;
  // Entities reached only through isolated patterns.
  std::set<std::string> isolated_only;
  ExplicationStats stats;
};

// Fixpoint discovery of the entities relevant to `plan` within `interval`.
// Throws Error(kExplosionLimit) when more than `limit` entities are found.
Explication explicate(const QueryPlan& plan, const Context& ctx, const TimeInterval& interval,
                      std::size_t limit, bool materialize_isolated = true);

// Merged dataset per relevant snapshot time, with unchanged entity states
// copied forward.
class AlignedTimeline {
 public:
  const std::vector<Timestamp>& times() const { return times_; }
  // Union of every entity's latest state at or before t.
  GraphSet dataset_at(Timestamp t) const;
  // Visits times() in order with the merged dataset, updated incrementally.
  void sweep(const std::function<void(Timestamp, const GraphSet&)>& visit) const;

 private:
  friend AlignedTimeline align_and_merge(std::vector<EntityStates> states,
                                         const TimeInterval& interval);
  struct Track {
    std::vector<std::pair<Timestamp, GraphSet>> versions;
  };
  std::vector<Timestamp> times_;
  std::vector<Track> tracks_;
  GraphSet untimed_;
};

AlignedTimeline align_and_merge(std::vector<EntityStates> states, const TimeInterval& interval);

namespace version_query {

enum class Mode { kCrossVersion, kSingleVersion };

struct Options {
  Mode mode = Mode::kCrossVersion;
  // Required for kSingleVersion.
  std::optional<Timestamp> at;
  TimeInterval interval;
};

struct Result {
  std::map<Timestamp, SolutionSet> results;
  std::vector<std::string> projected;
  std::set<std::string> relevant_entities;
  ExplicationStats stats;
};

// Parse, classify, explicate, align and evaluate per timeline time.
Result run(const std::string& query_text, const Options& options, const Context& ctx);
Result run(const ParsedQuery& query, const Options& options, const Context& ctx);

}  // namespace version_query

}  // namespace chrono_rdf
