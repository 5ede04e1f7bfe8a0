#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "chrono_rdf/rdf.hpp"

namespace chrono_rdf {

// A ground change set: quads to delete, then quads to insert.
struct Delta {
  std::vector<Quad> deletes;
  std::vector<Quad> inserts;
  std::string source_text;

  bool empty() const { return deletes.empty() && inserts.empty(); }
  // Structural equality ignores source_text.
  friend bool operator==(const Delta& a, const Delta& b) {
    return a.deletes == b.deletes && a.inserts == b.inserts;
  }
};

// Parses one or more ';'-separated DELETE DATA / INSERT DATA blocks whose
// bodies hold GRAPH <iri> { ... } groups and/or bare default-graph triples.
// Only absolute IRIs, literals and blank nodes are accepted: a variable throws
// SyntaxError with kVariableInDelta, a prefixed name or PREFIX declaration
// with kPrefixInDelta.
Delta parse_update(std::string_view text);

// Renders `deletes`/`inserts` as a ground update string (empty blocks are
// omitted; an empty delta renders as "").
std::string render_update(const std::vector<Quad>& deletes,
                          const std::vector<Quad>& inserts);

}  // namespace chrono_rdf
