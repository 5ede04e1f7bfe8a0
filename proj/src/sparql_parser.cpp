#include <algorithm>
#include <set>

#include "chrono_rdf/error.hpp"
#include "chrono_rdf/sparql.hpp"
#include "lexer.hpp"

namespace chrono_rdf {

using detail::Token;
using detail::TokenKind;
using detail::TokenStream;

std::vector<Term> TriplePattern::ground_terms() const {
  std::vector<Term> out;
  if (auto t = as_term(predicate)) out.push_back(*t);
  if (auto t = as_term(object)) out.push_back(*t);
  return out;
}

std::vector<std::string> TriplePattern::variables() const {
  std::vector<std::string> out;
  for (const PatternTerm* t : {&subject, &predicate, &object}) {
    if (auto v = as_variable(*t)) {
      if (std::find(out.begin(), out.end(), v->name) == out.end()) {
        out.push_back(v->name);
      }
    }
  }
  return out;
}

namespace {

std::string pattern_term_string(const PatternTerm& t) {
  if (auto v = as_variable(t)) return "?" + v->name;
  return std::get<Term>(t).to_ntriples();
}

// Upper-cased names that mark constructs outside the supported subset.
const std::set<std::string>& unsupported_words() {
  static const std::set<std::string> words = {
      "UNION",  "MINUS", "GRAPH",  "BIND",   "VALUES", "SERVICE",
      "ORDER",  "LIMIT", "OFFSET", "GROUP",  "HAVING", "FROM",
      "CONSTRUCT", "ASK", "DESCRIBE", "REDUCED", "INSERT", "DELETE",
      "LOAD", "CLEAR", "DROP", "CREATE", "WITH", "NOT", "EXISTS"};
  return words;
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), ::toupper);
  return s;
}

class SelectParser {
 public:
  explicit SelectParser(std::string_view text) : in_(detail::tokenize(text)) {}

  ParsedQuery parse() {
    prologue();
    check_unsupported(in_.peek());
    in_.expect_word("SELECT");
    if (in_.accept_word("DISTINCT")) query_.distinct = true;
    bool select_all = false;
    if (in_.accept_punct('*')) {
      select_all = true;
    } else {
      while (in_.peek().kind == TokenKind::kVariable) {
        query_.projected.push_back(in_.next().text);
      }
      if (query_.projected.empty()) {
        check_unsupported(in_.peek());
        if (in_.peek().is_punct('(')) {
          in_.fail("projection expressions", ErrorCode::kUnsupportedFeature);
        }
        in_.fail("expected projection variables or '*', found " +
                 detail::describe(in_.peek()));
      }
    }
    check_unsupported(in_.peek());
    in_.accept_word("WHERE");
    in_.expect_punct('{');
    group_body(TriplePattern::kRequired);
    in_.expect_punct('}');
    if (!in_.at_end()) {
      check_unsupported(in_.peek());
      in_.fail("unexpected " + detail::describe(in_.peek()) + " after query");
    }

    std::vector<std::string> seen;
    for (const auto& p : query_.patterns) {
      for (auto& v : p.variables()) {
        if (std::find(seen.begin(), seen.end(), v) == seen.end()) seen.push_back(v);
      }
    }
    for (const auto& f : query_.filters) {
      if (std::find(seen.begin(), seen.end(), f.variable) == seen.end()) {
        in_.fail(filter_tokens_.at(&f - query_.filters.data()),
                 "filter variable ?" + f.variable + " does not occur in any pattern");
      }
    }
    if (select_all) query_.projected = seen;
    return std::move(query_);
  }

 private:
  void check_unsupported(const Token& tok) {
    if (tok.kind == TokenKind::kWord && unsupported_words().count(upper(tok.text))) {
      in_.fail(tok, upper(tok.text), ErrorCode::kUnsupportedFeature);
    }
  }

  void prologue() {
    for (;;) {
      if (in_.accept_word("PREFIX")) {
        Token ns = in_.next();
        if (ns.kind != TokenKind::kPrefixedName || !ns.local.empty()) {
          in_.fail(ns, "expected prefix name, found " + detail::describe(ns));
        }
        Token iri = in_.next();
        if (iri.kind != TokenKind::kIriRef) {
          in_.fail(iri, "expected IRI, found " + detail::describe(iri));
        }
        query_.prefixes[ns.text] = resolve(iri);
      } else if (in_.accept_word("BASE")) {
        Token iri = in_.next();
        if (iri.kind != TokenKind::kIriRef) {
          in_.fail(iri, "expected IRI, found " + detail::describe(iri));
        }
        base_ = resolve(iri);
      } else {
        return;
      }
    }
  }

  std::string resolve(const Token& iri) {
    if (is_absolute_iri(iri.text)) return iri.text;
    if (!base_) in_.fail(iri, "relative IRI <" + iri.text + "> without BASE");
    return detail::resolve_iri(*base_, iri.text);
  }

  Term iri_term(const Token& tok) {
    if (tok.kind == TokenKind::kIriRef) return Term::iri(resolve(tok));
    auto it = query_.prefixes.find(tok.text);
    if (it == query_.prefixes.end()) {
      in_.fail(tok, "undeclared prefix '" + tok.text + ":'",
               ErrorCode::kUnknownPrefix);
    }
    return Term::iri(it->second + tok.local);
  }

  // Returns false at the end of a group.
  bool starts_pattern(const Token& tok) const {
    switch (tok.kind) {
      case TokenKind::kIriRef:
      case TokenKind::kPrefixedName:
      case TokenKind::kVariable:
      case TokenKind::kString:
      case TokenKind::kNumber:
      case TokenKind::kBlankLabel:
        return true;
      default:
        return tok.is_punct('[') || tok.is_punct('(');
    }
  }

  void group_body(int group) {
    for (;;) {
      const Token& tok = in_.peek();
      if (tok.is_punct('}') || tok.kind == TokenKind::kEnd) return;
      if (tok.is_punct('.')) {
        in_.next();
        continue;
      }
      check_unsupported(tok);
      if (tok.is_word("OPTIONAL")) {
        Token opt = in_.next();
        if (group != TriplePattern::kRequired) {
          in_.fail(opt, "nested OPTIONAL", ErrorCode::kUnsupportedFeature);
        }
        in_.expect_punct('{');
        group_body(next_group_++);
        in_.expect_punct('}');
        continue;
      }
      if (tok.is_word("FILTER")) {
        Token f = in_.next();
        if (group != TriplePattern::kRequired) {
          in_.fail(f, "FILTER inside OPTIONAL", ErrorCode::kUnsupportedFeature);
        }
        filter(f);
        continue;
      }
      if (tok.is_punct('{')) {
        in_.fail(tok, "nested group patterns", ErrorCode::kUnsupportedFeature);
      }
      if (!starts_pattern(tok)) {
        in_.fail(tok, "expected triple pattern, found " + detail::describe(tok));
      }
      triples_same_subject(group);
      const Token& after = in_.peek();
      check_unsupported(after);
      if (!after.is_punct('.') && !after.is_punct('}')) {
        if (after.is_punct('{')) {
          in_.fail(after, "nested group patterns", ErrorCode::kUnsupportedFeature);
        }
        if (!after.is_word("OPTIONAL") && !after.is_word("FILTER")) {
          in_.fail(after, "expected '.' or '}', found " + detail::describe(after));
        }
      }
    }
  }

  PatternTerm node(bool allow_literal) {
    Token tok = in_.next();
    switch (tok.kind) {
      case TokenKind::kVariable:
        return Variable{tok.text};
      case TokenKind::kIriRef:
      case TokenKind::kPrefixedName:
        return iri_term(tok);
      case TokenKind::kBlankLabel:
        in_.fail(tok, "blank nodes in queries", ErrorCode::kUnsupportedFeature);
      case TokenKind::kString:
      case TokenKind::kNumber:
        if (!allow_literal) in_.fail(tok, "literal in subject position");
        return literal(tok);
      case TokenKind::kWord:
        if (tok.text == "true" || tok.text == "false") {
          if (!allow_literal) in_.fail(tok, "literal in subject position");
          return Term::typed_literal(tok.text, std::string(kXsdBoolean));
        }
        check_unsupported(tok);
        break;
      default:
        if (tok.is_punct('[')) {
          in_.fail(tok, "blank nodes in queries", ErrorCode::kUnsupportedFeature);
        }
        if (tok.is_punct('(')) {
          in_.fail(tok, "collections", ErrorCode::kUnsupportedFeature);
        }
        break;
    }
    in_.fail(tok, "expected RDF term or variable, found " + detail::describe(tok));
  }

  Term literal(const Token& tok) {
    if (tok.kind == TokenKind::kNumber) return Term::typed_literal(tok.text, tok.local);
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

  PatternTerm verb() {
    const Token& tok = in_.peek();
    if (tok.kind == TokenKind::kWord && tok.text == "a") {
      in_.next();
      return Term::iri(std::string(kRdfType));
    }
    if (tok.is_punct('^') || tok.is_punct('!') || tok.is_punct('(')) {
      in_.fail(tok, "property paths", ErrorCode::kUnsupportedFeature);
    }
    if (tok.kind == TokenKind::kString || tok.kind == TokenKind::kNumber) {
      in_.fail(tok, "literal in predicate position");
    }
    return node(false);
  }

  void check_path_operator() {
    const Token& tok = in_.peek();
    for (char c : std::string_view("/|*+?^")) {
      if (tok.is_punct(c)) {
        in_.fail(tok, "property paths", ErrorCode::kUnsupportedFeature);
      }
    }
  }

  void triples_same_subject(int group) {
    PatternTerm subject = node(false);
    for (;;) {
      PatternTerm predicate = verb();
      check_path_operator();
      for (;;) {
        PatternTerm object = node(true);
        query_.patterns.push_back(TriplePattern{subject, predicate, object, group});
        if (!in_.accept_punct(',')) break;
      }
      if (!in_.accept_punct(';')) break;
      while (in_.accept_punct(';')) {
      }
      const Token& tok = in_.peek();
      if (tok.is_punct('.') || tok.is_punct('}')) break;
    }
  }

  std::string filter_variable(bool& use_str) {
    if (in_.accept_word("STR")) {
      use_str = true;
      in_.expect_punct('(');
      std::string v = filter_variable_plain();
      in_.expect_punct(')');
      return v;
    }
    return filter_variable_plain();
  }

  std::string filter_variable_plain() {
    Token tok = in_.next();
    if (tok.kind != TokenKind::kVariable) {
      in_.fail(tok, "filter expressions other than a variable",
               ErrorCode::kUnsupportedFeature);
    }
    return tok.text;
  }

  std::string string_argument() {
    Token tok = in_.next();
    if (tok.kind != TokenKind::kString) {
      in_.fail(tok, "expected string literal, found " + detail::describe(tok));
    }
    return tok.text;
  }

  void filter(const Token& at) {
    int parens = 0;
    while (in_.accept_punct('(')) ++parens;
    Token fn = in_.next();
    Filter f;
    if (fn.is_word("REGEX")) {
      f.kind = Filter::Kind::kRegex;
    } else if (fn.is_word("CONTAINS")) {
      f.kind = Filter::Kind::kContains;
    } else {
      in_.fail(fn, "FILTER " + (fn.kind == TokenKind::kWord ? upper(fn.text)
                                                           : detail::describe(fn)),
               ErrorCode::kUnsupportedFeature);
    }
    in_.expect_punct('(');
    f.variable = filter_variable(f.use_str);
    in_.expect_punct(',');
    f.argument = string_argument();
    if (f.kind == Filter::Kind::kRegex && in_.accept_punct(',')) {
      f.flags = string_argument();
    }
    in_.expect_punct(')');
    for (int i = 0; i < parens; ++i) in_.expect_punct(')');
    const Token& tok = in_.peek();
    if (tok.is_word("&&") || tok.is_punct('&') || tok.is_punct('|')) {
      in_.fail(tok, "compound filter expressions", ErrorCode::kUnsupportedFeature);
    }
    query_.filters.push_back(std::move(f));
    filter_tokens_.push_back(at);
  }

  TokenStream in_;
  ParsedQuery query_;
  std::optional<std::string> base_;
  std::vector<Token> filter_tokens_;
  int next_group_ = 0;
};

std::string quote(const std::string& s) {
  return Term::literal(s).to_ntriples();
}

}  // namespace

std::string TriplePattern::to_string() const {
  return pattern_term_string(subject) + " " + pattern_term_string(predicate) +
         " " + pattern_term_string(object) + " .";
}

int ParsedQuery::optional_group_count() const {
  int count = 0;
  for (const auto& p : patterns) count = std::max(count, p.optional_group + 1);
  return count;
}

ParsedQuery parse_select(std::string_view text) { return SelectParser(text).parse(); }

std::string to_sparql(const ParsedQuery& query) {
  std::string out = "SELECT ";
  if (query.distinct) out += "DISTINCT ";
  for (const auto& v : query.projected) out += "?" + v + " ";
  out += "WHERE {\n";
  int open_group = TriplePattern::kRequired;
  for (const auto& p : query.patterns) {
    if (p.optional_group != open_group) {
      if (open_group != TriplePattern::kRequired) out += "  }\n";
      if (p.is_optional()) out += "  OPTIONAL {\n";
      open_group = p.optional_group;
    }
    out += (p.is_optional() ? "    " : "  ") + p.to_string() + "\n";
  }
  if (open_group != TriplePattern::kRequired) out += "  }\n";
  for (const auto& f : query.filters) {
    std::string var = f.use_str ? "STR(?" + f.variable + ")" : "?" + f.variable;
    if (f.kind == Filter::Kind::kRegex) {
      out += "  FILTER REGEX(" + var + ", " + quote(f.argument);
      if (!f.flags.empty()) out += ", " + quote(f.flags);
      out += ")\n";
    } else {
      out += "  FILTER CONTAINS(" + var + ", " + quote(f.argument) + ")\n";
    }
  }
  out += "}\n";
  return out;
}

}  // namespace chrono_rdf
