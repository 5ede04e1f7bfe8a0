#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "chrono_rdf/rdf.hpp"

namespace chrono_rdf {

struct Variable {
  std::string name;  // without '?'

  friend auto operator<=>(const Variable&, const Variable&) = default;
  friend bool operator==(const Variable&, const Variable&) = default;
};

using PatternTerm = std::variant<Term, Variable>;

inline bool is_variable(const PatternTerm& t) {
  return std::holds_alternative<Variable>(t);
}
inline const Variable* as_variable(const PatternTerm& t) {
  return std::get_if<Variable>(&t);
}
inline const Term* as_term(const PatternTerm& t) { return std::get_if<Term>(&t); }

struct TriplePattern {
  static constexpr int kRequired = -1;

  PatternTerm subject;
  PatternTerm predicate;
  PatternTerm object;
  // kRequired, or the index of the OPTIONAL group the pattern belongs to.
  int optional_group = kRequired;

  bool is_optional() const { return optional_group != kRequired; }
  // Ground predicate/object terms.
  std::vector<Term> ground_terms() const;
  std::vector<std::string> variables() const;
  std::string to_string() const;

  friend bool operator==(const TriplePattern&, const TriplePattern&) = default;
};

struct Filter {
  enum class Kind { kRegex, kContains };

  Kind kind = Kind::kRegex;
  std::string variable;
  // Regex pattern or substring.
  std::string argument;
  // Regex flags ("i" is honoured).
  std::string flags;
  // Argument wrapped in STR(), which admits IRIs.
  bool use_str = false;

  friend bool operator==(const Filter&, const Filter&) = default;
};

struct ParsedQuery {
  std::vector<std::string> projected;
  bool distinct = false;
  std::vector<TriplePattern> patterns;
  std::vector<Filter> filters;
  std::map<std::string, std::string> prefixes;

  int optional_group_count() const;
  friend bool operator==(const ParsedQuery&, const ParsedQuery&) = default;
};

// Supported subset: PREFIX/BASE, SELECT [DISTINCT] vars|*, WHERE, '.', ';'
// and ',' separated patterns, flat OPTIONAL groups, FILTER REGEX and FILTER
// CONTAINS. Anything else throws SyntaxError with code kUnsupportedFeature.
ParsedQuery parse_select(std::string_view text);

// Pretty-printer with all IRIs written in full; parse_select(to_sparql(q))
// reproduces q apart from the prefix map.
std::string to_sparql(const ParsedQuery& query);

using Binding = std::map<std::string, Term>;

// A bag of solution mappings kept in canonical (sorted) order.
class SolutionSet {
 public:
  SolutionSet() = default;
  explicit SolutionSet(std::vector<Binding> rows);

  const std::vector<Binding>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  friend bool operator==(const SolutionSet&, const SolutionSet&) = default;

 private:
  std::vector<Binding> rows_;
};

// Matching ignores graph names: a triple stored in several graphs matches
// once. OPTIONAL groups are left joins and filters run last.
// Throws Error(kBadRegex) when a REGEX pattern does not compile.
SolutionSet evaluate(const ParsedQuery& query, const GraphSet& data);

// Calls `on_match` with `binding` extended by every distinct triple of
// `data` that matches `pattern`.
void match_pattern(const TriplePattern& pattern, const GraphSet& data,
                   const Binding& binding,
                   const std::function<void(const Binding&)>& on_match);

}  // namespace chrono_rdf
