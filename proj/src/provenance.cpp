#include "chrono_rdf/provenance.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "chrono_rdf/error.hpp"
#include "chrono_rdf/rdf_io.hpp"
#include "hash.hpp"

namespace chrono_rdf {

namespace {

std::string scope_prefix(std::string_view entity) {
  return "e" + detail::sha256_hex(entity).substr(0, 12) + "_";
}

Term scoped(const Term& t, const std::string& prefix) {
  if (!t.is_blank()) return t;
  return Term::blank(prefix + t.value());
}

Quad scoped(const Quad& q, const std::string& prefix) {
  return make_quad(scoped(q.subject(), prefix), q.predicate(),
                   scoped(q.object(), prefix), q.graph);
}

std::optional<std::string> single_value(const GraphSet& prov, const Term& subject,
                                        std::string_view predicate,
                                        const std::string& snapshot_id) {
  std::optional<std::string> out;
  auto [first, last] = prov.by_subject(subject);
  for (auto it = first; it != last; ++it) {
    if (!it->predicate().is_iri() || it->predicate().value() != predicate) continue;
    if (out && *out != it->object().value()) {
      throw Error(ErrorCode::kBrokenChain, "snapshot <" + snapshot_id +
                                               "> has several values for <" +
                                               std::string(predicate) + ">");
    }
    out = it->object().value();
  }
  return out;
}

Timestamp parse_time(const std::string& text, const std::string& snapshot_id) {
  auto t = Timestamp::try_parse(text);
  if (!t) {
    throw Error(ErrorCode::kBrokenChain, "snapshot <" + snapshot_id +
                                             "> has an invalid timestamp '" +
                                             text + "'");
  }
  return *t;
}

Snapshot read_snapshot(const std::string& entity, const std::string& id,
                       const GraphSet& prov) {
  Term subject = Term::iri(id);
  Snapshot s;
  s.id = id;
  s.entity = entity;
  auto generated = single_value(prov, subject, vocab::kGeneratedAtTime, id);
  if (!generated) {
    throw Error(ErrorCode::kBrokenChain,
                "snapshot <" + id + "> lacks prov:generatedAtTime");
  }
  s.generated_at = parse_time(*generated, id);
  if (auto inv = single_value(prov, subject, vocab::kInvalidatedAtTime, id)) {
    s.invalidated_at = parse_time(*inv, id);
  }
  s.attributed_to = single_value(prov, subject, vocab::kWasAttributedTo, id);
  s.primary_source = single_value(prov, subject, vocab::kHadPrimarySource, id);
  if (!s.primary_source) {
    s.primary_source = single_value(prov, subject, vocab::kHasPrimarySource, id);
  }
  s.derived_from = single_value(prov, subject, vocab::kWasDerivedFrom, id);
  s.description = single_value(prov, subject, vocab::kDescription, id);
  if (auto text = single_value(prov, subject, vocab::kHasUpdateQuery, id)) {
    try {
      s.update = scope_blank_nodes(parse_update(*text), entity);
    } catch (const Error& e) {
      throw Error(ErrorCode::kBadDelta, "snapshot <" + id + ">: " +
                                            std::string(error_code_name(e.code())) +
                                            ": " + e.what());
    }
  }
  return s;
}

// Orders snapshots by time; equal times are ordered along wasDerivedFrom.
void order_chain(std::vector<Snapshot>& snaps) {
  std::stable_sort(snaps.begin(), snaps.end(), [](const auto& a, const auto& b) {
    return a.generated_at < b.generated_at;
  });
  std::size_t i = 0;
  while (i < snaps.size()) {
    std::size_t j = i + 1;
    while (j < snaps.size() && snaps[j].generated_at == snaps[i].generated_at) ++j;
    if (j - i > 1) {
      std::vector<Snapshot> tie(std::make_move_iterator(snaps.begin() + i),
                                std::make_move_iterator(snaps.begin() + j));
      std::set<std::string> ids;
      for (const auto& s : tie) ids.insert(s.id);
      // Head of the tie: not derived from another tied snapshot.
      std::vector<Snapshot> ordered;
      auto head = std::find_if(tie.begin(), tie.end(), [&](const Snapshot& s) {
        return !s.derived_from || !ids.count(*s.derived_from);
      });
      while (head != tie.end() && ordered.size() < tie.size()) {
        ordered.push_back(*head);
        const std::string& prev = ordered.back().id;
        head = std::find_if(tie.begin(), tie.end(), [&](const Snapshot& s) {
          return s.derived_from && *s.derived_from == prev;
        });
      }
      if (ordered.size() != tie.size()) {
        throw Error(ErrorCode::kBrokenChain,
                    "snapshots generated at " + tie.front().generated_at.to_string() +
                        " are not linked by prov:wasDerivedFrom");
      }
      std::move(ordered.begin(), ordered.end(), snaps.begin() + i);
    }
    i = j;
  }
}

void check_chain(const EntityHistory& h) {
  const auto& s = h.snapshots;
  std::set<std::string> ids;
  for (const auto& snap : s) ids.insert(snap.id);
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k].invalidated_at && *s[k].invalidated_at < s[k].generated_at) {
      throw Error(ErrorCode::kBrokenChain,
                  "snapshot <" + s[k].id + "> is invalidated before generation");
    }
    if (k == 0) {
      if (s[k].derived_from && ids.count(*s[k].derived_from)) {
        throw Error(ErrorCode::kBrokenChain,
                    "first snapshot <" + s[k].id + "> derives from a later one");
      }
      continue;
    }
    if (s[k].derived_from && *s[k].derived_from != s[k - 1].id) {
      throw Error(ErrorCode::kBrokenChain,
                  "snapshot <" + s[k].id + "> derives from <" + *s[k].derived_from +
                      "> but follows <" + s[k - 1].id + ">");
    }
    if (s[k - 1].invalidated_at && *s[k - 1].invalidated_at != s[k].generated_at) {
      throw Error(ErrorCode::kBrokenChain,
                  "snapshot <" + s[k - 1].id +
                      "> is invalidated at a different time than its successor");
    }
    if (!s[k].update) {
      throw Error(ErrorCode::kBrokenChain,
                  "snapshot <" + s[k].id + "> follows <" + s[k - 1].id +
                      "> but has no update query");
    }
  }
}

}  // namespace

std::optional<std::size_t> EntityHistory::index_at(Timestamp t) const {
  auto it = std::upper_bound(
      snapshots.begin(), snapshots.end(), t,
      [](Timestamp value, const Snapshot& s) { return value < s.generated_at; });
  if (it == snapshots.begin()) return std::nullopt;
  return static_cast<std::size_t>(it - snapshots.begin()) - 1;
}

std::optional<std::size_t> EntityHistory::index_of_time(Timestamp t) const {
  auto idx = index_at(t);
  if (idx && snapshots[*idx].generated_at == t) return idx;
  return std::nullopt;
}

std::string EntityHistory::fingerprint() const {
  std::string material;
  for (const auto& s : snapshots) {
    material += s.id;
    material += '\n';
    if (s.update) material += s.update->source_text;
    material += '\n';
  }
  return detail::sha256_hex(material);
}

std::vector<std::string> history_entities(const GraphSet& provenance) {
  std::set<std::string> out;
  for (const Quad& q : provenance) {
    if (q.predicate().value() == vocab::kSpecializationOf && q.object().is_iri()) {
      out.insert(q.object().value());
    }
  }
  return {out.begin(), out.end()};
}

std::vector<std::string> snapshot_ids(const std::string& entity,
                                      const GraphSet& provenance) {
  std::set<std::string> out;
  for (const Quad& q : provenance) {
    if (q.object().is_iri() && q.object().value() == entity &&
        q.predicate().value() == vocab::kSpecializationOf && q.subject().is_iri()) {
      out.insert(q.subject().value());
    }
  }
  return {out.begin(), out.end()};
}

EntityHistory load_history(const std::string& entity, const GraphSet& provenance) {
  return load_history(entity, snapshot_ids(entity, provenance), provenance);
}

EntityHistory load_history(const std::string& entity,
                           const std::vector<std::string>& snapshot_iris,
                           const GraphSet& provenance) {
  if (snapshot_iris.empty()) {
    throw Error(ErrorCode::kNoHistory, "no provenance snapshots for <" + entity + ">");
  }
  EntityHistory h;
  h.entity = entity;
  for (const auto& id : snapshot_iris) {
    h.snapshots.push_back(read_snapshot(entity, id, provenance));
  }
  order_chain(h.snapshots);
  check_chain(h);
  return h;
}

std::string scope_blank_label(std::string_view entity, std::string_view label) {
  return scope_prefix(entity) + std::string(label);
}

Delta scope_blank_nodes(Delta delta, std::string_view entity) {
  std::string prefix;
  auto rewrite = [&](std::vector<Quad>& quads) {
    for (Quad& q : quads) {
      if (!q.subject().is_blank() && !q.object().is_blank()) continue;
      if (prefix.empty()) prefix = scope_prefix(entity);
      q = scoped(q, prefix);
    }
  };
  rewrite(delta.deletes);
  rewrite(delta.inserts);
  return delta;
}

GraphSet scope_blank_nodes(const GraphSet& graph, std::string_view entity) {
  std::string prefix;
  GraphSet out;
  for (const Quad& q : graph) {
    if (!q.subject().is_blank() && !q.object().is_blank()) {
      out.insert(q);
      continue;
    }
    if (prefix.empty()) prefix = scope_prefix(entity);
    out.insert(scoped(q, prefix));
  }
  return out;
}

Delta entity_scoped(const Delta& delta, const Term& entity) {
  auto keep = [&](const Quad& q) { return q.subject() == entity || q.subject().is_blank(); };
  Delta out;
  out.source_text = delta.source_text;
  std::copy_if(delta.deletes.begin(), delta.deletes.end(),
               std::back_inserter(out.deletes), keep);
  std::copy_if(delta.inserts.begin(), delta.inserts.end(),
               std::back_inserter(out.inserts), keep);
  return out;
}

Delta invert(const Delta& delta) {
  Delta out;
  out.deletes = delta.inserts;
  out.inserts = delta.deletes;
  out.source_text = render_update(out.deletes, out.inserts);
  return out;
}

Delta compose(const std::vector<Delta>& deltas) {
  // Last action per quad, with the step at which it happened for ordering.
  struct Action {
    bool insert;
    std::size_t step;
  };
  std::map<Quad, Action> last;
  std::size_t step = 0;
  for (const Delta& d : deltas) {
    for (const Quad& q : d.deletes) last[q] = {false, step++};
    for (const Quad& q : d.inserts) last[q] = {true, step++};
  }
  std::vector<std::pair<std::size_t, const Quad*>> deletes, inserts;
  for (const auto& [quad, action] : last) {
    (action.insert ? inserts : deletes).emplace_back(action.step, &quad);
  }
  std::sort(deletes.begin(), deletes.end());
  std::sort(inserts.begin(), inserts.end());
  Delta out;
  for (const auto& [_, q] : deletes) out.deletes.push_back(*q);
  for (const auto& [_, q] : inserts) out.inserts.push_back(*q);
  out.source_text = render_update(out.deletes, out.inserts);
  return out;
}

GraphSet apply(const Delta& delta, GraphSet graphs, GraphMatching matching) {
  for (const Quad& q : delta.deletes) {
    if (matching == GraphMatching::kExact) {
      graphs.erase(q);
    } else {
      graphs.erase_triple(q.triple);
    }
  }
  for (const Quad& q : delta.inserts) graphs.insert(q);
  return graphs;
}

std::string delta_search_text(const Delta& delta) {
  GraphSet all(delta.deletes.begin(), delta.deletes.end());
  all.insert_all(GraphSet(delta.inserts.begin(), delta.inserts.end()));
  return serialize(all);
}

}  // namespace chrono_rdf
