#include <algorithm>
#include <regex>

#include "chrono_rdf/error.hpp"
#include "chrono_rdf/sparql.hpp"

namespace chrono_rdf {

SolutionSet::SolutionSet(std::vector<Binding> rows) : rows_(std::move(rows)) {
  std::sort(rows_.begin(), rows_.end());
}

namespace {

// Binds `slot` against `value`; false on conflict.
bool unify(const PatternTerm& slot, const Term& value, Binding& binding) {
  if (auto t = as_term(slot)) return *t == value;
  const std::string& name = std::get<Variable>(slot).name;
  auto [it, inserted] = binding.emplace(name, value);
  return inserted || it->second == value;
}

const Term* resolved(const PatternTerm& slot, const Binding& binding) {
  if (auto t = as_term(slot)) return t;
  auto it = binding.find(std::get<Variable>(slot).name);
  return it == binding.end() ? nullptr : &it->second;
}

int boundness(const TriplePattern& p, const Binding& binding) {
  int score = 0;
  if (resolved(p.subject, binding)) score += 4;
  if (resolved(p.object, binding)) score += 2;
  if (resolved(p.predicate, binding)) score += 1;
  return score;
}

void solve(std::vector<const TriplePattern*>& pending, const GraphSet& data,
           const Binding& binding, std::vector<Binding>& out) {
  if (pending.empty()) {
    out.push_back(binding);
    return;
  }
  auto best = std::max_element(
      pending.begin(), pending.end(), [&](const auto* a, const auto* b) {
        return boundness(*a, binding) < boundness(*b, binding);
      });
  const TriplePattern* chosen = *best;
  std::swap(*best, pending.back());
  pending.pop_back();
  match_pattern(*chosen, data, binding,
                [&](const Binding& extended) { solve(pending, data, extended, out); });
  pending.push_back(chosen);
}

struct CompiledFilter {
  const Filter* filter;
  std::optional<std::regex> regex;
};

// Simple, xsd:string and language-tagged literals.
bool string_like(const Term& t) { return t.is_literal() && t.datatype().empty(); }

bool passes(const CompiledFilter& cf, const Binding& binding) {
  auto it = binding.find(cf.filter->variable);
  if (it == binding.end()) return false;
  const Term& value = it->second;
  bool admissible = string_like(value) || (cf.filter->use_str && !value.is_blank());
  if (!admissible) return false;
  if (cf.filter->kind == Filter::Kind::kContains) {
    return value.value().find(cf.filter->argument) != std::string::npos;
  }
  return std::regex_search(value.value(), *cf.regex);
}

}  // namespace

void match_pattern(const TriplePattern& pattern, const GraphSet& data,
                   const Binding& binding,
                   const std::function<void(const Binding&)>& on_match) {
  const Term* subject = resolved(pattern.subject, binding);
  if (subject && subject->is_literal()) return;
  auto [first, last] = subject ? data.by_subject(*subject)
                               : std::make_pair(data.begin(), data.end());
  const Triple* previous = nullptr;
  for (auto it = first; it != last; ++it) {
    const Triple& t = it->triple;
    if (previous && *previous == t) continue;
    previous = &t;
    Binding extended = binding;
    if (unify(pattern.subject, t.subject, extended) &&
        unify(pattern.predicate, t.predicate, extended) &&
        unify(pattern.object, t.object, extended)) {
      on_match(extended);
    }
  }
}

SolutionSet evaluate(const ParsedQuery& query, const GraphSet& data) {
  std::vector<CompiledFilter> filters;
  for (const auto& f : query.filters) {
    CompiledFilter cf{&f, std::nullopt};
    if (f.kind == Filter::Kind::kRegex) {
      auto flags = std::regex::extended;
      if (f.flags.find('i') != std::string::npos) flags |= std::regex::icase;
      try {
        cf.regex.emplace(f.argument, flags);
      } catch (const std::regex_error& e) {
        throw Error(ErrorCode::kBadRegex,
                    "bad regular expression \"" + f.argument + "\": " + e.what());
      }
    }
    filters.push_back(std::move(cf));
  }

  std::vector<const TriplePattern*> required;
  for (const auto& p : query.patterns) {
    if (!p.is_optional()) required.push_back(&p);
  }
  std::vector<Binding> solutions;
  if (!data.empty()) solve(required, data, Binding{}, solutions);

  for (int g = 0; g < query.optional_group_count(); ++g) {
    std::vector<const TriplePattern*> group;
    for (const auto& p : query.patterns) {
      if (p.optional_group == g) group.push_back(&p);
    }
    std::vector<Binding> joined;
    for (const auto& s : solutions) {
      std::size_t before = joined.size();
      solve(group, data, s, joined);
      if (joined.size() == before) joined.push_back(s);
    }
    solutions = std::move(joined);
  }

  std::vector<Binding> rows;
  for (const auto& s : solutions) {
    if (!std::all_of(filters.begin(), filters.end(),
                     [&](const CompiledFilter& cf) { return passes(cf, s); })) {
      continue;
    }
    Binding projected;
    for (const auto& v : query.projected) {
      if (auto it = s.find(v); it != s.end()) projected.emplace(v, it->second);
    }
    rows.push_back(std::move(projected));
  }
  if (query.distinct) {
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  }
  return SolutionSet(std::move(rows));
}

}  // namespace chrono_rdf
