#pragma once

// Tokenizer shared by the Turtle-subset, SPARQL SELECT and SPARQL update
// parsers. Not part of the public API.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "chrono_rdf/error.hpp"

namespace chrono_rdf::detail {

enum class TokenKind {
  kIriRef,         // <...>, text = unescaped content
  kPrefixedName,   // prefix:local, text = prefix, local = local part
  kBlankLabel,     // _:label, text = label
  kVariable,       // ?name / $name, text = name
  kString,         // text = unescaped value
  kLangTag,        // @en directly after a string, text = tag
  kAtKeyword,      // @prefix / @base, text = word without '@'
  kDoubleCaret,    // ^^
  kNumber,         // text = lexeme, local = datatype IRI
  kWord,           // bare identifier: SELECT, a, true, ...
  kPunct,          // single character in text
  kEnd,
};

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string text;
  std::string local;
  std::size_t line = 1;
  std::size_t column = 1;

  bool is_punct(char c) const {
    return kind == TokenKind::kPunct && text.size() == 1 && text[0] == c;
  }
  // Case-insensitive keyword match.
  bool is_word(std::string_view word) const;
};

std::vector<Token> tokenize(std::string_view text);

// Cursor over a token vector with error helpers.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  Token next();
  bool at_end() const { return peek().kind == TokenKind::kEnd; }

  bool accept_punct(char c);
  bool accept_word(std::string_view word);
  void expect_punct(char c);
  void expect_word(std::string_view word);

  [[noreturn]] void fail(const Token& at, const std::string& message,
                         ErrorCode code = ErrorCode::kSyntaxError) const;
  [[noreturn]] void fail(const std::string& message,
                         ErrorCode code = ErrorCode::kSyntaxError) const {
    fail(peek(), message, code);
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::string describe(const Token& token);

// RFC 3986 reference resolution. `base` must be absolute.
std::string resolve_iri(std::string_view base, std::string_view reference);

}  // namespace chrono_rdf::detail
