#include "chrono_rdf/update.hpp"

#include <map>
#include <optional>

#include "chrono_rdf/error.hpp"
#include "lexer.hpp"

namespace chrono_rdf {

using detail::Token;
using detail::TokenKind;
using detail::TokenStream;

namespace {

class UpdateParser {
 public:
  explicit UpdateParser(std::string_view text) : in_(detail::tokenize(text)) {}

  Delta parse() {
    Delta delta;
    while (!in_.at_end()) {
      const Token& tok = in_.peek();
      if (tok.is_word("PREFIX") || tok.is_word("BASE")) {
        in_.fail(tok, "prefix declarations are not permitted in deltas",
                 ErrorCode::kPrefixInDelta);
      }
      bool is_delete;
      if (in_.accept_word("DELETE")) {
        is_delete = true;
      } else if (in_.accept_word("INSERT")) {
        is_delete = false;
      } else {
        in_.fail("expected DELETE DATA or INSERT DATA, found " +
                 detail::describe(tok));
      }
      if (in_.peek().is_word("WHERE") || in_.peek().is_punct('{')) {
        in_.fail("only DELETE DATA and INSERT DATA are supported",
                 ErrorCode::kUnsupportedFeature);
      }
      in_.expect_word("DATA");
      in_.expect_punct('{');
      block(is_delete ? delta.deletes : delta.inserts);
      in_.expect_punct('}');
      if (!in_.accept_punct(';')) break;
    }
    if (!in_.at_end()) {
      in_.fail("unexpected " + detail::describe(in_.peek()));
    }
    return delta;
  }

 private:
  void block(std::vector<Quad>& out) {
    for (;;) {
      const Token& tok = in_.peek();
      if (tok.is_punct('}') || tok.kind == TokenKind::kEnd) return;
      if (tok.is_punct('.')) {
        in_.next();
        continue;
      }
      if (in_.accept_word("GRAPH")) {
        Token g = in_.next();
        if (g.kind != TokenKind::kIriRef) ground_fail(g, "graph name");
        Term graph = iri(g);
        in_.expect_punct('{');
        triples(out, graph);
        in_.expect_punct('}');
        continue;
      }
      triples(out, std::nullopt);
    }
  }

  void triples(std::vector<Quad>& out, const std::optional<Term>& graph) {
    for (;;) {
      const Token& tok = in_.peek();
      if (tok.is_punct('}') || tok.kind == TokenKind::kEnd) return;
      if (!graph && tok.is_word("GRAPH")) return;
      if (tok.is_punct('.')) {
        in_.next();
        continue;
      }
      Term s = term(false, "subject");
      for (;;) {
        Term p = predicate();
        for (;;) {
          out.push_back(make_quad(s, p, term(true, "object"), graph));
          if (!in_.accept_punct(',')) break;
        }
        if (!in_.accept_punct(';')) break;
        const Token& after = in_.peek();
        if (after.is_punct('.') || after.is_punct('}')) break;
      }
      const Token& end = in_.peek();
      if (!end.is_punct('.') && !end.is_punct('}')) {
        in_.fail("expected '.' or '}', found " + detail::describe(end));
      }
    }
  }

  [[noreturn]] void ground_fail(const Token& tok, const char* role) {
    if (tok.kind == TokenKind::kVariable) {
      in_.fail(tok, "variable ?" + tok.text + " is not permitted in deltas",
               ErrorCode::kVariableInDelta);
    }
    if (tok.kind == TokenKind::kPrefixedName) {
      in_.fail(tok,
               "prefixed name " + detail::describe(tok) +
                   " is not permitted in deltas",
               ErrorCode::kPrefixInDelta);
    }
    in_.fail(tok, std::string("expected ") + role + ", found " +
                      detail::describe(tok));
  }

  Term iri(const Token& tok) {
    if (!is_absolute_iri(tok.text)) {
      in_.fail(tok, "relative IRI <" + tok.text + "> in delta");
    }
    return Term::iri(tok.text);
  }

  Term predicate() {
    Token tok = in_.next();
    if (tok.kind == TokenKind::kWord && tok.text == "a") {
      return Term::iri(std::string(kRdfType));
    }
    if (tok.kind != TokenKind::kIriRef) ground_fail(tok, "predicate IRI");
    return iri(tok);
  }

  Term term(bool allow_literal, const char* role) {
    Token tok = in_.next();
    switch (tok.kind) {
      case TokenKind::kIriRef:
        return iri(tok);
      case TokenKind::kBlankLabel:
        return Term::blank(tok.text);
      case TokenKind::kString:
        if (!allow_literal) break;
        if (in_.peek().kind == TokenKind::kLangTag) {
          return Term::lang_literal(tok.text, in_.next().text);
        }
        if (in_.peek().kind == TokenKind::kDoubleCaret) {
          in_.next();
          Token dt = in_.next();
          if (dt.kind != TokenKind::kIriRef) ground_fail(dt, "datatype IRI");
          return Term::typed_literal(tok.text, iri(dt).value());
        }
        return Term::literal(tok.text);
      case TokenKind::kNumber:
        if (!allow_literal) break;
        return Term::typed_literal(tok.text, tok.local);
      case TokenKind::kWord:
        if (allow_literal && (tok.text == "true" || tok.text == "false")) {
          return Term::typed_literal(tok.text, std::string(kXsdBoolean));
        }
        break;
      default:
        break;
    }
    ground_fail(tok, role);
  }

  TokenStream in_;
};

void render_block(std::string& out, const char* keyword,
                  const std::vector<Quad>& quads) {
  // Group by graph, keeping first-appearance order of graphs.
  std::vector<std::optional<Term>> order;
  std::map<std::optional<Term>, std::vector<const Quad*>> groups;
  for (const Quad& q : quads) {
    auto [it, inserted] = groups.try_emplace(q.graph);
    if (inserted) order.push_back(q.graph);
    it->second.push_back(&q);
  }
  out += keyword;
  out += " DATA {";
  for (const auto& g : order) {
    if (g) out += " GRAPH " + g->to_ntriples() + " {";
    for (const Quad* q : groups[g]) {
      out += ' ';
      out += q->subject().to_ntriples();
      out += ' ';
      out += q->predicate().to_ntriples();
      out += ' ';
      out += q->object().to_ntriples();
      out += " .";
    }
    if (g) out += " }";
  }
  out += " }";
}

}  // namespace

Delta parse_update(std::string_view text) {
  Delta delta = UpdateParser(text).parse();
  delta.source_text = std::string(text);
  return delta;
}

std::string render_update(const std::vector<Quad>& deletes,
                          const std::vector<Quad>& inserts) {
  std::string out;
  if (!deletes.empty()) render_block(out, "DELETE", deletes);
  if (!inserts.empty()) {
    if (!out.empty()) out += "; ";
    render_block(out, "INSERT", inserts);
  }
  return out;
}

}  // namespace chrono_rdf
