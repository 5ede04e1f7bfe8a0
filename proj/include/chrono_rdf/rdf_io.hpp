#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "chrono_rdf/rdf.hpp"

namespace chrono_rdf {

enum class DocumentFormat { kNQuads, kTurtle };

// Parses N-Quads, or the Turtle subset (@base, @prefix, ';' and ',' lists,
// typed and language literals, numeric/boolean shorthand, the 'a' keyword).
// Collections, bracketed blank nodes, quoted triples and relative IRIs
// without a base are rejected. Throws SyntaxError; undeclared prefixes throw
// SyntaxError with code kUnknownPrefix.
GraphSet parse_document(std::string_view text, DocumentFormat format,
                        std::optional<std::string> base = std::nullopt);

// Format from a file extension: .nq/.nt -> N-Quads, .ttl -> Turtle.
std::optional<DocumentFormat> format_for_path(std::string_view path);

// Canonical N-Quads: one statement per line, '\n' endings, lines sorted
// bytewise.
std::string serialize(const GraphSet& graphs);

}  // namespace chrono_rdf
