#include "chrono_rdf/rdf.hpp"

#include <algorithm>
#include <cctype>
#include <iterator>

#include "chrono_rdf/error.hpp"

namespace chrono_rdf {

namespace {

void append_escaped_literal(std::string& out, std::string_view value) {
  for (char c : value) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
}

}  // namespace

bool is_absolute_iri(std::string_view value) {
  if (value.empty() || !std::isalpha(static_cast<unsigned char>(value[0]))) {
    return false;
  }
  for (std::size_t i = 1; i < value.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(value[i]);
    if (c == ':') return true;
    if (!std::isalnum(c) && c != '+' && c != '-' && c != '.') return false;
  }
  return false;
}

Term Term::iri(std::string value) {
  return Term(Kind::kIri, std::move(value), {}, {});
}

Term Term::blank(std::string label) {
  return Term(Kind::kBlank, std::move(label), {}, {});
}

Term Term::literal(std::string value) {
  return Term(Kind::kLiteral, std::move(value), {}, {});
}

Term Term::typed_literal(std::string value, std::string datatype) {
  if (datatype == kXsdString) datatype.clear();
  return Term(Kind::kLiteral, std::move(value), std::move(datatype), {});
}

Term Term::lang_literal(std::string value, std::string language) {
  std::transform(language.begin(), language.end(), language.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return Term(Kind::kLiteral, std::move(value), {}, std::move(language));
}

std::string Term::effective_datatype() const {
  if (kind_ != Kind::kLiteral) return {};
  if (!language_.empty()) return std::string(kRdfLangString);
  if (datatype_.empty()) return std::string(kXsdString);
  return datatype_;
}

std::string Term::to_ntriples() const {
  std::string out;
  switch (kind_) {
    case Kind::kIri:
      out.reserve(value_.size() + 2);
      out += '<';
      out += value_;
      out += '>';
      break;
    case Kind::kBlank:
      out = "_:" + value_;
      break;
    case Kind::kLiteral:
      out.reserve(value_.size() + datatype_.size() + 6);
      out += '"';
      append_escaped_literal(out, value_);
      out += '"';
      if (!language_.empty()) {
        out += '@';
        out += language_;
      } else if (!datatype_.empty()) {
        out += "^^<";
        out += datatype_;
        out += '>';
      }
      break;
  }
  return out;
}

void validate_triple(const Triple& triple) {
  if (triple.subject.is_literal()) {
    throw Error(ErrorCode::kSyntaxError, "literal in subject position");
  }
  if (!triple.predicate.is_iri()) {
    throw Error(ErrorCode::kSyntaxError, "predicate must be an IRI");
  }
}

std::string Quad::to_nquads() const {
  std::string out = triple.subject.to_ntriples();
  out += ' ';
  out += triple.predicate.to_ntriples();
  out += ' ';
  out += triple.object.to_ntriples();
  if (graph) {
    out += ' ';
    out += graph->to_ntriples();
  }
  out += " .";
  return out;
}

Quad make_quad(Term s, Term p, Term o, std::optional<Term> g) {
  return Quad{Triple{std::move(s), std::move(p), std::move(o)}, std::move(g)};
}

std::size_t GraphSet::erase_triple(const Triple& triple) {
  std::size_t removed = 0;
  auto [first, last] = quads_.equal_range(triple.subject);
  for (auto it = first; it != last;) {
    if (it->triple == triple) {
      it = quads_.erase(it);
      ++removed;
    } else {
      ++it;
    }
  }
  return removed;
}

bool GraphSet::contains_triple(const Triple& triple) const {
  auto [first, last] = quads_.equal_range(triple.subject);
  return std::any_of(first, last,
                     [&](const Quad& q) { return q.triple == triple; });
}

std::pair<GraphSet::const_iterator, GraphSet::const_iterator>
GraphSet::by_subject(const Term& subject) const {
  return quads_.equal_range(subject);
}

GraphSet GraphSet::subject_graph(const Term& subject) const {
  auto [first, last] = by_subject(subject);
  return GraphSet(first, last);
}

GraphSet GraphSet::union_with(const GraphSet& other) const {
  GraphSet out = *this;
  out.insert_all(other);
  return out;
}

GraphSet GraphSet::minus(const GraphSet& other) const {
  GraphSet out;
  std::set_difference(quads_.begin(), quads_.end(), other.quads_.begin(),
                      other.quads_.end(),
                      std::inserter(out.quads_, out.quads_.end()), QuadLess{});
  return out;
}

void GraphSet::insert_all(const GraphSet& other) {
  quads_.insert(other.quads_.begin(), other.quads_.end());
}

GraphDiff graph_diff(const GraphSet& newer, const GraphSet& older) {
  return {newer.minus(older), older.minus(newer)};
}

}  // namespace chrono_rdf
