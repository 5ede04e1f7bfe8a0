#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chrono_rdf {

inline constexpr std::string_view kXsdString =
    "http://www.w3.org/2001/XMLSchema#string";
inline constexpr std::string_view kXsdDateTime =
    "http://www.w3.org/2001/XMLSchema#dateTime";
inline constexpr std::string_view kXsdInteger =
    "http://www.w3.org/2001/XMLSchema#integer";
inline constexpr std::string_view kXsdDecimal =
    "http://www.w3.org/2001/XMLSchema#decimal";
inline constexpr std::string_view kXsdDouble =
    "http://www.w3.org/2001/XMLSchema#double";
inline constexpr std::string_view kXsdBoolean =
    "http://www.w3.org/2001/XMLSchema#boolean";
inline constexpr std::string_view kRdfType =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view kRdfLangString =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";

// An RDF term. Literal equality is lexical: value, datatype and language are
// compared as strings. A plain literal is stored with an empty datatype, which
// stands for xsd:string; constructing with xsd:string normalizes to empty.
class Term {
 public:
  enum class Kind : unsigned char { kIri, kBlank, kLiteral };

  Term() = default;

  static Term iri(std::string value);
  // `label` without the "_:" prefix.
  static Term blank(std::string label);
  static Term literal(std::string value);
  static Term typed_literal(std::string value, std::string datatype);
  static Term lang_literal(std::string value, std::string language);

  Kind kind() const { return kind_; }
  bool is_iri() const { return kind_ == Kind::kIri; }
  bool is_blank() const { return kind_ == Kind::kBlank; }
  bool is_literal() const { return kind_ == Kind::kLiteral; }

  const std::string& value() const { return value_; }
  // Empty for IRIs, blanks, plain and language-tagged literals.
  const std::string& datatype() const { return datatype_; }
  const std::string& language() const { return language_; }
  // Datatype IRI with the xsd:string / rdf:langString defaults applied.
  std::string effective_datatype() const;

  // N-Triples lexical form: <iri>, _:label, "escaped"^^<dt>, "escaped"@lang.
  std::string to_ntriples() const;

  friend auto operator<=>(const Term&, const Term&) = default;
  friend bool operator==(const Term&, const Term&) = default;

 private:
  Term(Kind kind, std::string value, std::string datatype, std::string language)
      : kind_(kind),
        value_(std::move(value)),
        datatype_(std::move(datatype)),
        language_(std::move(language)) {}

  Kind kind_ = Kind::kIri;
  std::string value_;
  std::string datatype_;
  std::string language_;
};

// True when `value` starts with a URI scheme followed by ':'.
bool is_absolute_iri(std::string_view value);

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  friend auto operator<=>(const Triple&, const Triple&) = default;
  friend bool operator==(const Triple&, const Triple&) = default;
};

// Throws Error(SyntaxError) when subject is a literal or predicate not an IRI.
void validate_triple(const Triple& triple);

struct Quad {
  Triple triple;
  // Absent for the default graph.
  std::optional<Term> graph;

  const Term& subject() const { return triple.subject; }
  const Term& predicate() const { return triple.predicate; }
  const Term& object() const { return triple.object; }

  // One N-Quads statement without the trailing newline.
  std::string to_nquads() const;

  friend auto operator<=>(const Quad&, const Quad&) = default;
  friend bool operator==(const Quad&, const Quad&) = default;
};

Quad make_quad(Term s, Term p, Term o, std::optional<Term> g = std::nullopt);

// Orders quads by subject first, so all statements about one subject form a
// contiguous range.
struct QuadLess {
  using is_transparent = void;
  bool operator()(const Quad& a, const Quad& b) const { return a < b; }
  bool operator()(const Quad& a, const Term& subject) const {
    return a.subject() < subject;
  }
  bool operator()(const Term& subject, const Quad& b) const {
    return subject < b.subject();
  }
};

// A finite set of quads.
class GraphSet {
 public:
  using Storage = std::set<Quad, QuadLess>;
  using const_iterator = Storage::const_iterator;

  GraphSet() = default;
  GraphSet(std::initializer_list<Quad> quads) : quads_(quads) {}
  template <typename It>
  GraphSet(It first, It last) : quads_(first, last) {}

  bool insert(Quad quad) { return quads_.insert(std::move(quad)).second; }
  bool erase(const Quad& quad) { return quads_.erase(quad) > 0; }
  // Removes every quad with the given triple, whatever its graph.
  std::size_t erase_triple(const Triple& triple);
  bool contains(const Quad& quad) const { return quads_.count(quad) > 0; }
  bool contains_triple(const Triple& triple) const;

  std::size_t size() const { return quads_.size(); }
  bool empty() const { return quads_.empty(); }
  void clear() { quads_.clear(); }

  const_iterator begin() const { return quads_.begin(); }
  const_iterator end() const { return quads_.end(); }

  // All quads whose subject equals `subject`.
  std::pair<const_iterator, const_iterator> by_subject(const Term& subject) const;
  GraphSet subject_graph(const Term& subject) const;

  GraphSet union_with(const GraphSet& other) const;
  GraphSet minus(const GraphSet& other) const;
  void insert_all(const GraphSet& other);

  friend bool operator==(const GraphSet& a, const GraphSet& b) {
    return a.quads_ == b.quads_;
  }

 private:
  Storage quads_;
};

// added = newer \ older, removed = older \ newer.
struct GraphDiff {
  GraphSet added;
  GraphSet removed;
};
GraphDiff graph_diff(const GraphSet& newer, const GraphSet& older);

}  // namespace chrono_rdf
