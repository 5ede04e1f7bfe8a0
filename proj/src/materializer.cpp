#include "chrono_rdf/materializer.hpp"

#include <algorithm>

#include "chrono_rdf/error.hpp"

namespace chrono_rdf {

namespace {

GraphSet rewind(const Snapshot& snapshot, const Term& entity, GraphSet graph,
                MaterializeStats* stats) {
  Delta inverse = invert(entity_scoped(*snapshot.update, entity));
  if (stats) ++stats->delta_applications;
  return apply(inverse, std::move(graph), GraphMatching::kTriple);
}

// Versions lowest..n-1, oldest first, by backward chaining from the present.
std::vector<VersionedGraph> chain_down_to(const std::string& entity,
                                          const GraphSet& data,
                                          const EntityHistory& history,
                                          std::size_t lowest,
                                          MaterializeStats* stats) {
  const auto& snaps = history.snapshots;
  Term subject = Term::iri(entity);
  std::vector<VersionedGraph> out;
  GraphSet graph = current_graph(entity, data);
  for (std::size_t k = snaps.size(); k-- > lowest;) {
    if (k + 1 < snaps.size()) graph = rewind(snaps[k + 1], subject, graph, stats);
    out.push_back(VersionedGraph{entity, snaps[k], graph, k + 1 < snaps.size()});
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

GraphSet current_graph(const std::string& entity, const GraphSet& data) {
  return scope_blank_nodes(data.subject_graph(Term::iri(entity)), entity);
}

Materialization materialize_at(const std::string& entity, Timestamp time,
                               const GraphSet& data, const EntityHistory& history,
                               MaterializeStats* stats) {
  if (history.snapshots.empty()) {
    throw Error(ErrorCode::kNoHistory, "no provenance snapshots for <" + entity + ">");
  }
  auto idx = history.index_at(time);
  if (!idx) {
    throw Error(ErrorCode::kBeforeCreation,
                "<" + entity + "> did not exist at " + time.to_string() +
                    "; it was created at " +
                    history.snapshots.front().generated_at.to_string());
  }
  const auto& snaps = history.snapshots;
  Term subject = Term::iri(entity);
  GraphSet graph = current_graph(entity, data);
  for (std::size_t k = snaps.size() - 1; k > *idx; --k) {
    graph = rewind(snaps[k], subject, std::move(graph), stats);
  }
  Materialization m;
  m.version = VersionedGraph{entity, snaps[*idx], std::move(graph),
                             *idx + 1 < snaps.size()};
  for (std::size_t k = 0; k < snaps.size(); ++k) {
    if (k != *idx) m.other_snapshots.push_back(snaps[k]);
  }
  return m;
}

std::vector<VersionedGraph> materialize_all(const std::string& entity,
                                            const GraphSet& data,
                                            const EntityHistory& history,
                                            const TimeInterval& interval,
                                            MaterializeStats* stats) {
  const auto& snaps = history.snapshots;
  auto first_in = std::find_if(snaps.begin(), snaps.end(), [&](const Snapshot& s) {
    return interval.contains(s.generated_at);
  });
  if (first_in == snaps.end()) return {};
  auto versions = chain_down_to(entity, data, history,
                                static_cast<std::size_t>(first_in - snaps.begin()),
                                stats);
  std::erase_if(versions, [&](const VersionedGraph& v) {
    return !interval.contains(v.snapshot.generated_at);
  });
  return versions;
}

std::vector<VersionedGraph> materialize_span(const std::string& entity,
                                             const GraphSet& data,
                                             const EntityHistory& history,
                                             const TimeInterval& interval,
                                             MaterializeStats* stats) {
  const auto& snaps = history.snapshots;
  if (snaps.empty()) return {};
  std::size_t lowest = 0;
  if (interval.start) {
    auto carried = history.index_at(*interval.start);
    lowest = carried.value_or(0);
  }
  if (interval.end && snaps[lowest].generated_at > *interval.end) return {};
  auto versions = chain_down_to(entity, data, history, lowest, stats);
  std::erase_if(versions, [&](const VersionedGraph& v) {
    return interval.end && v.snapshot.generated_at > *interval.end;
  });
  return versions;
}

}  // namespace chrono_rdf
