#include "chrono_rdf/version_query.hpp"

#include <algorithm>
#include <numeric>

#include "chrono_rdf/error.hpp"

namespace chrono_rdf {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

std::vector<std::string> term_forms(const std::vector<Term>& terms) {
  std::vector<std::string> forms;
  for (const Term& t : terms) forms.push_back(t.to_ntriples());
  return forms;
}

// Variables that occur in subject position anywhere in the query.
std::set<std::string> subject_variables(const std::vector<TriplePattern>& patterns) {
  std::set<std::string> out;
  for (const auto& p : patterns) {
    if (auto v = as_variable(p.subject)) out.insert(v->name);
  }
  return out;
}

GraphSet delta_graph(const Delta& d) {
  GraphSet g(d.deletes.begin(), d.deletes.end());
  for (const Quad& q : d.inserts) g.insert(q);
  return g;
}

}  // namespace

QueryPlan classify(const ParsedQuery& query) {
  const auto& patterns = query.patterns;
  UnionFind components(patterns.size());
  std::map<std::string, std::size_t> first_use;
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    for (const auto& name : patterns[i].variables()) {
      auto [it, inserted] = first_use.emplace(name, i);
      if (!inserted) components.unite(i, it->second);
    }
  }
  std::set<std::size_t> anchored;
  QueryPlan plan;
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    if (auto t = as_term(patterns[i].subject); t && t->is_iri()) {
      anchored.insert(components.find(i));
      plan.seed_iris.insert(t->value());
    }
  }
  bool any_ground = false;
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    if (anchored.count(components.find(i))) {
      plan.joined.push_back(patterns[i]);
    } else {
      plan.isolated.push_back(patterns[i]);
      plan.known_terms_per_isolated.push_back(patterns[i].ground_terms());
      any_ground = any_ground || !plan.known_terms_per_isolated.back().empty();
    }
  }
  if (!plan.isolated.empty() && !any_ground) {
    throw Error(ErrorCode::kUnboundedQuery,
                "the query has isolated triple patterns but no IRI or literal to search for");
  }
  return plan;
}

std::set<DeltaHit> search_deltas(const std::vector<Term>& known_terms, const Context& ctx) {
  if (known_terms.empty()) return {};
  return ctx.search_deltas(term_forms(known_terms));
}

namespace {

class Explicator {
 public:
  Explicator(const QueryPlan& plan, const Context& ctx, const TimeInterval& interval,
             std::size_t limit, bool materialize_isolated)
      : plan_(plan),
        ctx_(ctx),
        interval_(interval),
        limit_(limit),
        materialize_isolated_(materialize_isolated),
        subject_vars_(subject_variables(all_patterns(plan))) {}

  Explication run() {
    for (const auto& iri : plan_.seed_iris) discover(iri, false);
    for (std::size_t i = 0; i < plan_.isolated.size(); ++i) {
      for (const auto& iri : isolated_candidates(i)) discover(iri, true);
    }
    while (!queue_.empty()) {
      std::string entity = queue_.back();
      queue_.pop_back();
      materialize(entity);
    }
    return std::move(out_);
  }

 private:
  static std::vector<TriplePattern> all_patterns(const QueryPlan& plan) {
    std::vector<TriplePattern> all = plan.joined;
    all.insert(all.end(), plan.isolated.begin(), plan.isolated.end());
    return all;
  }

  void discover(const std::string& iri, bool from_isolated) {
    bool is_new = out_.entities.insert(iri).second;
    if (is_new && out_.entities.size() > limit_) {
      throw Error(ErrorCode::kExplosionLimit,
                  "more than " + std::to_string(limit_) + " relevant entities");
    }
    if (is_new) {
      if (from_isolated) out_.isolated_only.insert(iri);
      if (!from_isolated || materialize_isolated_) queue_.push_back(iri);
      return;
    }
    if (!from_isolated && out_.isolated_only.erase(iri) && !materialize_isolated_) {
      queue_.push_back(iri);
    }
  }

  std::set<std::string> isolated_candidates(std::size_t i) {
    std::set<std::string> out;
    const auto& terms = plan_.known_terms_per_isolated[i];
    const TriplePattern& pattern = plan_.isolated[i];
    if (terms.empty() || pattern.is_optional()) return out;
    TriplePattern required = pattern;
    required.optional_group = TriplePattern::kRequired;
    for (const DeltaHit& hit : search_deltas(terms, ctx_)) {
      auto h = ctx_.provenance().history(hit.entity);
      if (!h) continue;
      for (const Snapshot& s : h->snapshots) {
        if (s.id != hit.snapshot || !s.update) continue;
        match_pattern(required, delta_graph(*s.update), {}, [&](const Binding& b) {
          const Term* subject = as_term(pattern.subject);
          if (!subject) subject = &b.at(std::get<Variable>(pattern.subject).name);
          if (subject->is_iri()) out.insert(subject->value());
        });
      }
    }
    auto current = ctx_.data().subjects_matching(required);
    out.insert(current.begin(), current.end());
    return out;
  }

  void materialize(const std::string& entity) {
    if (out_.states.count(entity)) return;
    EntityStates states{entity, {}, std::nullopt};
    auto history = ctx_.provenance().history(entity);
    if (history) {
      states.versions = cached_span(entity, *history, interval_, ctx_, out_.stats.counters);
      if (!states.versions.empty()) {
        auto first = history->index_of_time(states.versions.front().snapshot.generated_at);
        out_.stats.snapshots_involved += history->snapshots.size() - first.value_or(0);
      }
    } else {
      GraphSet present = current_graph(entity, ctx_.data().entity_graph(entity));
      if (!present.empty()) states.untimed = std::move(present);
    }
    auto& stored = out_.states.emplace(entity, std::move(states)).first->second;
    for (const auto& v : stored.versions) promote_from(v.graphs);
    if (stored.untimed) promote_from(*stored.untimed);
  }

  // Joined required patterns matched against one state; bound IRIs of
  // subject-position variables become entities.
  void promote_from(const GraphSet& graph) {
    for (const auto& pattern : plan_.joined) {
      if (pattern.is_optional()) continue;
      auto vars = pattern.variables();
      match_pattern(pattern, graph, {}, [&](const Binding& b) {
        for (const auto& name : vars) {
          if (!subject_vars_.count(name)) continue;
          const Term& value = b.at(name);
          if (value.is_iri()) discover(value.value(), false);
        }
      });
    }
  }

  const QueryPlan& plan_;
  const Context& ctx_;
  TimeInterval interval_;
  std::size_t limit_;
  bool materialize_isolated_;
  std::set<std::string> subject_vars_;
  std::vector<std::string> queue_;
  Explication out_;
};

}  // namespace

Explication explicate(const QueryPlan& plan, const Context& ctx, const TimeInterval& interval,
                      std::size_t limit, bool materialize_isolated) {
  return Explicator(plan, ctx, interval, limit, materialize_isolated).run();
}

AlignedTimeline align_and_merge(std::vector<EntityStates> states, const TimeInterval& interval) {
  AlignedTimeline timeline;
  std::set<Timestamp> times;
  for (auto& s : states) {
    if (s.untimed) timeline.untimed_.insert_all(*s.untimed);
    if (s.versions.empty()) continue;
    AlignedTimeline::Track track;
    for (auto& v : s.versions) {
      if (interval.contains(v.snapshot.generated_at)) times.insert(v.snapshot.generated_at);
      track.versions.emplace_back(v.snapshot.generated_at, std::move(v.graphs));
    }
    std::sort(track.versions.begin(), track.versions.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    timeline.tracks_.push_back(std::move(track));
  }
  timeline.times_.assign(times.begin(), times.end());
  return timeline;
}

GraphSet AlignedTimeline::dataset_at(Timestamp t) const {
  GraphSet out = untimed_;
  for (const auto& track : tracks_) {
    auto it = std::upper_bound(track.versions.begin(), track.versions.end(), t,
                               [](Timestamp value, const auto& v) { return value < v.first; });
    if (it != track.versions.begin()) out.insert_all(std::prev(it)->second);
  }
  return out;
}

void AlignedTimeline::sweep(const std::function<void(Timestamp, const GraphSet&)>& visit) const {
  // (time, track, version) change events in time order.
  struct Event {
    Timestamp time;
    std::size_t track;
    std::size_t version;
  };
  std::vector<Event> events;
  for (std::size_t i = 0; i < tracks_.size(); ++i) {
    for (std::size_t k = 0; k < tracks_[i].versions.size(); ++k) {
      events.push_back({tracks_[i].versions[k].first, i, k});
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) { return a.time < b.time; });
  GraphSet current = untimed_;
  std::size_t next = 0;
  for (Timestamp t : times_) {
    for (; next < events.size() && events[next].time <= t; ++next) {
      const auto& track = tracks_[events[next].track];
      std::size_t k = events[next].version;
      // Entity graphs are disjoint by subject, so a state can be swapped out
      // quad by quad.
      if (k > 0) {
        for (const Quad& q : track.versions[k - 1].second) current.erase(q);
      }
      current.insert_all(track.versions[k].second);
    }
    visit(t, current);
  }
}

namespace version_query {

Result run(const std::string& query_text, const Options& options, const Context& ctx) {
  return run(parse_select(query_text), options, ctx);
}

Result run(const ParsedQuery& query, const Options& options, const Context& ctx) {
  options.interval.validate();
  QueryPlan plan = classify(query);
  TimeInterval interval = options.interval;
  if (options.mode == Mode::kSingleVersion) {
    if (!options.at) {
      throw Error(ErrorCode::kConfigError, "a single-version query needs a time");
    }
    interval = TimeInterval::at(*options.at);
  }
  Explication ex = explicate(plan, ctx, interval, ctx.options().explosion_limit);

  Result result;
  result.projected = query.projected;
  result.relevant_entities = ex.entities;
  result.stats = ex.stats;

  std::vector<EntityStates> states;
  std::optional<Timestamp> latest;
  bool any_state = false;
  for (auto& [_, s] : ex.states) {
    for (const auto& v : s.versions) {
      if (!latest || *latest < v.snapshot.generated_at) latest = v.snapshot.generated_at;
    }
    any_state = any_state || s.untimed || !s.versions.empty();
    states.push_back(std::move(s));
  }

  if (options.mode == Mode::kSingleVersion) {
    if (!any_state) return result;
    Timestamp key = latest.value_or(*options.at);
    AlignedTimeline timeline = align_and_merge(std::move(states), TimeInterval::at(key));
    result.results.emplace(key, evaluate(query, timeline.dataset_at(key)));
    return result;
  }

  AlignedTimeline timeline = align_and_merge(std::move(states), interval);
  timeline.sweep([&](Timestamp t, const GraphSet& dataset) {
    result.results.emplace(t, evaluate(query, dataset));
  });
  return result;
}

}  // namespace version_query

}  // namespace chrono_rdf
