#include "chrono_rdf/rdf_io.hpp"

#include <algorithm>
#include <map>
#include <vector>

#include "chrono_rdf/error.hpp"
#include "lexer.hpp"

namespace chrono_rdf {

using detail::Token;
using detail::TokenKind;
using detail::TokenStream;

namespace {

class TurtleParser {
 public:
  TurtleParser(std::string_view text, std::optional<std::string> base)
      : in_(detail::tokenize(text)), base_(std::move(base)) {}

  GraphSet parse() {
    while (!in_.at_end()) {
      const Token& tok = in_.peek();
      if (tok.kind == TokenKind::kAtKeyword) {
        directive(true);
      } else if (tok.is_word("PREFIX") || tok.is_word("BASE")) {
        directive(false);
      } else {
        triples();
        in_.expect_punct('.');
      }
    }
    return std::move(out_);
  }

 private:
  void directive(bool turtle_style) {
    Token kw = in_.next();
    std::string name = kw.text;
    std::transform(name.begin(), name.end(), name.begin(), ::tolower);
    if (name == "prefix") {
      Token ns = in_.next();
      if (ns.kind != TokenKind::kPrefixedName || !ns.local.empty()) {
        in_.fail(ns, "expected prefix name, found " + detail::describe(ns));
      }
      Token iri = in_.next();
      if (iri.kind != TokenKind::kIriRef) {
        in_.fail(iri, "expected IRI, found " + detail::describe(iri));
      }
      prefixes_[ns.text] = resolve(iri);
    } else if (name == "base") {
      Token iri = in_.next();
      if (iri.kind != TokenKind::kIriRef) {
        in_.fail(iri, "expected IRI, found " + detail::describe(iri));
      }
      base_ = resolve(iri);
    } else {
      in_.fail(kw, "unknown directive @" + kw.text);
    }
    if (turtle_style) in_.expect_punct('.');
  }

  std::string resolve(const Token& iri) {
    if (is_absolute_iri(iri.text)) return iri.text;
    if (!base_) in_.fail(iri, "relative IRI <" + iri.text + "> without @base");
    return detail::resolve_iri(*base_, iri.text);
  }

  Term iri_term(const Token& tok) {
    if (tok.kind == TokenKind::kIriRef) return Term::iri(resolve(tok));
    auto it = prefixes_.find(tok.text);
    if (it == prefixes_.end()) {
      in_.fail(tok, "undeclared prefix '" + tok.text + ":'",
               ErrorCode::kUnknownPrefix);
    }
    return Term::iri(it->second + tok.local);
  }

  void reject_unsupported(const Token& tok) {
    if (tok.is_punct('(')) in_.fail(tok, "collections are not supported");
    if (tok.is_punct('[')) in_.fail(tok, "bracketed blank nodes are not supported");
    if (tok.is_punct('<')) in_.fail(tok, "quoted triples are not supported");
  }

  Term subject() {
    Token tok = in_.next();
    switch (tok.kind) {
      case TokenKind::kIriRef:
      case TokenKind::kPrefixedName:
        return iri_term(tok);
      case TokenKind::kBlankLabel:
        return Term::blank(tok.text);
      default:
        reject_unsupported(tok);
        in_.fail(tok, "expected subject, found " + detail::describe(tok));
    }
  }

  Term verb() {
    Token tok = in_.next();
    if (tok.kind == TokenKind::kWord && tok.text == "a") {
      return Term::iri(std::string(kRdfType));
    }
    if (tok.kind == TokenKind::kIriRef || tok.kind == TokenKind::kPrefixedName) {
      return iri_term(tok);
    }
    in_.fail(tok, "expected predicate, found " + detail::describe(tok));
  }

  Term object() {
    Token tok = in_.next();
    switch (tok.kind) {
      case TokenKind::kIriRef:
      case TokenKind::kPrefixedName:
        return iri_term(tok);
      case TokenKind::kBlankLabel:
        return Term::blank(tok.text);
      case TokenKind::kNumber:
        return Term::typed_literal(tok.text, tok.local);
      case TokenKind::kWord:
        if (tok.text == "true" || tok.text == "false") {
          return Term::typed_literal(tok.text, std::string(kXsdBoolean));
        }
        break;
      case TokenKind::kString: {
        if (in_.peek().kind == TokenKind::kLangTag) {
          return Term::lang_literal(tok.text, in_.next().text);
        }
        if (in_.peek().kind == TokenKind::kDoubleCaret) {
          in_.next();
          Token dt = in_.next();
          if (dt.kind != TokenKind::kIriRef && dt.kind != TokenKind::kPrefixedName) {
            in_.fail(dt, "expected datatype IRI, found " + detail::describe(dt));
          }
          return Term::typed_literal(tok.text, iri_term(dt).value());
        }
        return Term::literal(tok.text);
      }
      default:
        break;
    }
    reject_unsupported(tok);
    in_.fail(tok, "expected object, found " + detail::describe(tok));
  }

  void triples() {
    Term s = subject();
    for (;;) {
      Term p = verb();
      for (;;) {
        out_.insert(make_quad(s, p, object()));
        if (!in_.accept_punct(',')) break;
      }
      if (!in_.accept_punct(';')) break;
      while (in_.accept_punct(';')) {
      }
      if (in_.peek().is_punct('.')) break;
    }
  }

  TokenStream in_;
  std::optional<std::string> base_;
  std::map<std::string, std::string> prefixes_;
  GraphSet out_;
};

class NQuadsParser {
 public:
  explicit NQuadsParser(std::string_view text) : in_(detail::tokenize(text)) {}

  GraphSet parse() {
    while (!in_.at_end()) {
      Token first = in_.peek();
      Term s = term(false);
      if (s.is_literal()) in_.fail(first, "literal in subject position");
      Token ptok = in_.peek();
      Term p = term(false);
      if (!p.is_iri()) in_.fail(ptok, "predicate must be an IRI");
      Term o = term(true);
      std::optional<Term> g;
      if (!in_.peek().is_punct('.')) {
        Token gtok = in_.peek();
        g = term(false);
        if (!g->is_iri()) in_.fail(gtok, "graph name must be an IRI");
      }
      Token dot = in_.peek();
      in_.expect_punct('.');
      if (in_.peek().line == dot.line && !in_.at_end()) {
        in_.fail(in_.peek(), "one statement per line expected");
      }
      out_.insert(make_quad(std::move(s), std::move(p), std::move(o), std::move(g)));
    }
    return std::move(out_);
  }

 private:
  Term term(bool allow_literal) {
    Token tok = in_.next();
    switch (tok.kind) {
      case TokenKind::kIriRef:
        if (!is_absolute_iri(tok.text)) {
          in_.fail(tok, "relative IRI <" + tok.text + "> in N-Quads");
        }
        return Term::iri(tok.text);
      case TokenKind::kBlankLabel:
        return Term::blank(tok.text);
      case TokenKind::kString:
        if (!allow_literal) in_.fail(tok, "unexpected literal");
        if (in_.peek().kind == TokenKind::kLangTag) {
          return Term::lang_literal(tok.text, in_.next().text);
        }
        if (in_.peek().kind == TokenKind::kDoubleCaret) {
          in_.next();
          Token dt = in_.next();
          if (dt.kind != TokenKind::kIriRef || !is_absolute_iri(dt.text)) {
            in_.fail(dt, "expected absolute datatype IRI");
          }
          return Term::typed_literal(tok.text, dt.text);
        }
        return Term::literal(tok.text);
      case TokenKind::kPrefixedName:
        in_.fail(tok, "prefixed names are not allowed in N-Quads");
      default:
        in_.fail(tok, "expected RDF term, found " + detail::describe(tok));
    }
  }

  TokenStream in_;
  GraphSet out_;
};

}  // namespace

GraphSet parse_document(std::string_view text, DocumentFormat format,
                        std::optional<std::string> base) {
  if (format == DocumentFormat::kNQuads) return NQuadsParser(text).parse();
  return TurtleParser(text, std::move(base)).parse();
}

std::optional<DocumentFormat> format_for_path(std::string_view path) {
  if (path.ends_with(".nq") || path.ends_with(".nt")) {
    return DocumentFormat::kNQuads;
  }
  if (path.ends_with(".ttl")) return DocumentFormat::kTurtle;
  return std::nullopt;
}

std::string serialize(const GraphSet& graphs) {
  std::vector<std::string> lines;
  lines.reserve(graphs.size());
  for (const Quad& q : graphs) lines.push_back(q.to_nquads());
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& line : lines) {
    out += line;
    out += '\n';
  }
  return out;
}

}  // namespace chrono_rdf
