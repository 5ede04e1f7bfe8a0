#include "chrono_rdf/delta_query.hpp"

#include <algorithm>
#include <tuple>

#include "chrono_rdf/error.hpp"
#include "chrono_rdf/materializer.hpp"

namespace chrono_rdf {

std::string_view change_kind_name(ChangeKind kind) {
  switch (kind) {
    case ChangeKind::kCreated:
      return "created";
    case ChangeKind::kModified:
      return "modified";
    case ChangeKind::kDeleted:
      return "deleted";
  }
  return "modified";
}

namespace {

DeltaPair net_pair(const Delta& delta) {
  Delta net = compose({delta});
  return DeltaPair{GraphSet(net.inserts.begin(), net.inserts.end()),
                   GraphSet(net.deletes.begin(), net.deletes.end())};
}

}  // namespace

DeltaPair get_delta(const std::string& entity, Timestamp snapshot_time,
                    const EntityHistory& history, const GraphSet& present) {
  auto idx = history.index_of_time(snapshot_time);
  if (!idx) {
    throw Error(ErrorCode::kNoSuchSnapshot,
                "<" + entity + "> has no snapshot generated at " + snapshot_time.to_string());
  }
  const Snapshot& snap = history.snapshots[*idx];
  if (snap.is_creation()) {
    auto m = materialize_at(entity, snapshot_time, present, history);
    return DeltaPair{std::move(m.version.graphs), {}};
  }
  return net_pair(entity_scoped(*snap.update, Term::iri(entity)));
}

bool touches(const Delta& delta, const std::set<std::string>& properties) {
  if (properties.empty()) return !delta.empty();
  auto hit = [&](const Quad& q) { return properties.count(q.predicate().value()) > 0; };
  return std::any_of(delta.deletes.begin(), delta.deletes.end(), hit) ||
         std::any_of(delta.inserts.begin(), delta.inserts.end(), hit);
}

namespace delta_query {

ChangeReport run(const std::string& query_text, const std::set<std::string>& changed_properties,
                 const TimeInterval& interval, const Context& ctx) {
  return run(parse_select(query_text), changed_properties, interval, ctx);
}

ChangeReport run(const ParsedQuery& query, const std::set<std::string>& changed_properties,
                 const TimeInterval& interval, const Context& ctx) {
  interval.validate();
  QueryPlan plan = classify(query);
  Explication ex = explicate(plan, ctx, interval, ctx.options().explosion_limit, false);

  ChangeReport report;
  report.relevant_entities = ex.entities;
  report.stats = ex.stats;
  for (const auto& entity : ex.entities) {
    auto history = ctx.provenance().history(entity);
    if (!history) continue;
    const auto& snaps = history->snapshots;
    bool materialized = ex.states.count(entity) > 0;
    std::optional<bool> present_empty;
    for (std::size_t k = 1; k < snaps.size(); ++k) {
      const Snapshot& s = snaps[k];
      if (!s.update || !interval.contains(s.generated_at)) continue;
      // Deltas read without reconstruction still count as involved.
      if (!materialized) ++report.stats.snapshots_involved;
      Delta scoped = entity_scoped(*s.update, Term::iri(entity));
      if (!touches(scoped, changed_properties)) continue;
      ChangeRecord record{entity, s.id, s.generated_at, s.description, s.attributed_to,
                          net_pair(scoped), ChangeKind::kModified};
      if (k + 1 == snaps.size()) {
        if (!present_empty) present_empty = ctx.data().entity_graph(entity).empty();
        if (*present_empty) record.kind = ChangeKind::kDeleted;
      }
      report.records.push_back(std::move(record));
    }
  }
  std::sort(report.records.begin(), report.records.end(),
            [](const ChangeRecord& a, const ChangeRecord& b) {
              return std::tie(a.time, a.entity, a.snapshot) <
                     std::tie(b.time, b.entity, b.snapshot);
            });
  return report;
}

}  // namespace delta_query

}  // namespace chrono_rdf
