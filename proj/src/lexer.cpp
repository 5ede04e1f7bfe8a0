#include "lexer.hpp"

#include <cctype>
#include <charconv>

#include "chrono_rdf/rdf.hpp"

namespace chrono_rdf::detail {

namespace {

bool is_name_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c >= 0x80;
}

bool is_name_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '-' || c >= 0x80;
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    bool after_string = false;
    for (;;) {
      bool had_space = skip_space_and_comments();
      Token tok;
      tok.line = line_;
      tok.column = column_;
      if (pos_ >= text_.size()) {
        tok.kind = TokenKind::kEnd;
        out.push_back(std::move(tok));
        return out;
      }
      char c = text_[pos_];
      bool string_follows = false;
      if (c == '<' && scan_iri(tok)) {
      } else if (c == '"' || c == '\'') {
        scan_string(tok);
        string_follows = true;
      } else if (c == '@') {
        advance();
        std::string word = take_while([](unsigned char ch) {
          return std::isalnum(ch) || ch == '-';
        });
        if (word.empty()) fail(tok, "expected language tag or directive");
        if (after_string && !had_space) {
          tok.kind = TokenKind::kLangTag;
        } else {
          tok.kind = TokenKind::kAtKeyword;
        }
        tok.text = std::move(word);
      } else if (c == '^' && peek_char(1) == '^') {
        advance();
        advance();
        tok.kind = TokenKind::kDoubleCaret;
      } else if ((c == '?' || c == '$') && is_name_char(peek_char(1))) {
        advance();
        tok.kind = TokenKind::kVariable;
        tok.text = take_while([](unsigned char ch) { return is_name_char(ch); });
      } else if (c == '_' && peek_char(1) == ':') {
        advance();
        advance();
        tok.kind = TokenKind::kBlankLabel;
        tok.text = take_local_name();
        if (tok.text.empty()) fail(tok, "empty blank node label");
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 ((c == '+' || c == '-') &&
                  (std::isdigit(peek_char(1)) ||
                   (peek_char(1) == '.' && std::isdigit(peek_char(2))))) ||
                 (c == '.' && std::isdigit(peek_char(1)))) {
        scan_number(tok);
      } else if (is_name_start(static_cast<unsigned char>(c)) || c == ':') {
        scan_word_or_pname(tok);
      } else {
        advance();
        tok.kind = TokenKind::kPunct;
        tok.text = std::string(1, c);
      }
      after_string = string_follows ||
                     (after_string && tok.kind == TokenKind::kLangTag);
      out.push_back(std::move(tok));
    }
  }

 private:
  [[noreturn]] void fail(const Token& at, const std::string& message) {
    throw SyntaxError(at.line, at.column, message);
  }

  unsigned char peek_char(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size()
               ? static_cast<unsigned char>(text_[pos_ + ahead])
               : 0;
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  template <typename Pred>
  std::string take_while(Pred pred) {
    std::string out;
    while (pos_ < text_.size() && pred(static_cast<unsigned char>(text_[pos_]))) {
      out += text_[pos_];
      advance();
    }
    return out;
  }

  bool skip_space_and_comments() {
    bool skipped = false;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        advance();
        skipped = true;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        skipped = true;
      } else {
        break;
      }
    }
    return skipped;
  }

  unsigned long read_hex(const Token& at, std::size_t digits) {
    if (pos_ + digits > text_.size()) fail(at, "truncated unicode escape");
    unsigned long cp = 0;
    auto first = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, first + digits, cp, 16);
    if (ec != std::errc{} || ptr != first + digits) {
      fail(at, "invalid unicode escape");
    }
    for (std::size_t i = 0; i < digits; ++i) advance();
    return cp;
  }

  // Returns false (consuming nothing) when '<' does not start an IRI.
  bool scan_iri(Token& tok) {
    std::size_t look = pos_ + 1;
    while (look < text_.size() && text_[look] != '>') {
      char c = text_[look];
      if (c == ' ' || c == '\n' || c == '\t' || c == '\r' || c == '<' ||
          c == '"' || c == '{' || c == '}') {
        return false;
      }
      ++look;
    }
    if (look >= text_.size()) return false;
    advance();
    std::string value;
    while (text_[pos_] != '>') {
      if (text_[pos_] == '\\') {
        advance();
        char kind = pos_ < text_.size() ? text_[pos_] : 0;
        if (kind != 'u' && kind != 'U') fail(tok, "invalid escape in IRI");
        advance();
        append_utf8(value, read_hex(tok, kind == 'u' ? 4 : 8));
      } else {
        value += text_[pos_];
        advance();
      }
    }
    advance();
    tok.kind = TokenKind::kIriRef;
    tok.text = std::move(value);
    return true;
  }

  void scan_string(Token& tok) {
    char quote = text_[pos_];
    bool long_form = peek_char(1) == quote && peek_char(2) == quote;
    advance();
    if (long_form) {
      advance();
      advance();
    }
    std::string value;
    for (;;) {
      if (pos_ >= text_.size()) fail(tok, "unterminated string literal");
      char c = text_[pos_];
      if (c == quote) {
        if (!long_form) {
          advance();
          break;
        }
        if (peek_char(1) == quote && peek_char(2) == quote) {
          advance();
          advance();
          advance();
          break;
        }
        value += c;
        advance();
        continue;
      }
      if (!long_form && (c == '\n' || c == '\r')) {
        fail(tok, "line break in short string literal");
      }
      if (c == '\\') {
        advance();
        if (pos_ >= text_.size()) fail(tok, "unterminated escape");
        char e = text_[pos_];
        advance();
        switch (e) {
          case 't': value += '\t'; break;
          case 'b': value += '\b'; break;
          case 'n': value += '\n'; break;
          case 'r': value += '\r'; break;
          case 'f': value += '\f'; break;
          case '"': value += '"'; break;
          case '\'': value += '\''; break;
          case '\\': value += '\\'; break;
          case 'u': append_utf8(value, read_hex(tok, 4)); break;
          case 'U': append_utf8(value, read_hex(tok, 8)); break;
          default: fail(tok, std::string("invalid escape \\") + e);
        }
        continue;
      }
      value += c;
      advance();
    }
    tok.kind = TokenKind::kString;
    tok.text = std::move(value);
  }

  void scan_number(Token& tok) {
    std::string lexeme;
    if (text_[pos_] == '+' || text_[pos_] == '-') {
      lexeme += text_[pos_];
      advance();
    }
    lexeme += take_while([](unsigned char c) { return std::isdigit(c); });
    std::string datatype(kXsdInteger);
    if (peek_char() == '.' && std::isdigit(peek_char(1))) {
      lexeme += '.';
      advance();
      lexeme += take_while([](unsigned char c) { return std::isdigit(c); });
      datatype = kXsdDecimal;
    }
    if (peek_char() == 'e' || peek_char() == 'E') {
      std::size_t save_pos = pos_, save_line = line_, save_col = column_;
      std::string exp(1, static_cast<char>(peek_char()));
      advance();
      if (peek_char() == '+' || peek_char() == '-') {
        exp += static_cast<char>(peek_char());
        advance();
      }
      std::string digits =
          take_while([](unsigned char c) { return std::isdigit(c); });
      if (digits.empty()) {
        pos_ = save_pos;
        line_ = save_line;
        column_ = save_col;
      } else {
        lexeme += exp + digits;
        datatype = kXsdDouble;
      }
    }
    tok.kind = TokenKind::kNumber;
    tok.text = std::move(lexeme);
    tok.local = std::move(datatype);
  }

  // PN_LOCAL without a trailing '.'.
  std::string take_local_name() {
    std::string out;
    while (pos_ < text_.size()) {
      unsigned char c = static_cast<unsigned char>(text_[pos_]);
      if (is_name_char(c) || c == ':') {
        out += static_cast<char>(c);
        advance();
      } else if (c == '.' && pos_ + 1 < text_.size() &&
                 (is_name_char(peek_char(1)) || peek_char(1) == ':')) {
        out += '.';
        advance();
      } else if (c == '%' && std::isxdigit(peek_char(1)) &&
                 std::isxdigit(peek_char(2))) {
        out += text_.substr(pos_, 3);
        advance();
        advance();
        advance();
      } else if (c == '\\' && pos_ + 1 < text_.size() &&
                 std::string_view("_~.-!$&'()*+,;=/?#@%")
                         .find(text_[pos_ + 1]) != std::string_view::npos) {
        advance();
        out += text_[pos_];
        advance();
      } else {
        break;
      }
    }
    return out;
  }

  void scan_word_or_pname(Token& tok) {
    std::string prefix;
    while (pos_ < text_.size()) {
      unsigned char c = static_cast<unsigned char>(text_[pos_]);
      if (is_name_char(c)) {
        prefix += static_cast<char>(c);
        advance();
      } else if (c == '.' && (is_name_char(peek_char(1)))) {
        prefix += '.';
        advance();
      } else {
        break;
      }
    }
    if (peek_char() == ':') {
      advance();
      tok.kind = TokenKind::kPrefixedName;
      tok.text = std::move(prefix);
      tok.local = take_local_name();
      return;
    }
    tok.kind = TokenKind::kWord;
    tok.text = std::move(prefix);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

}  // namespace

bool Token::is_word(std::string_view word) const {
  if (kind != TokenKind::kWord || text.size() != word.size()) return false;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(text[i])) !=
        std::toupper(static_cast<unsigned char>(word[i]))) {
      return false;
    }
  }
  return true;
}

std::vector<Token> tokenize(std::string_view text) {
  return Scanner(text).run();
}

const Token& TokenStream::peek(std::size_t ahead) const {
  std::size_t idx = pos_ + ahead;
  return idx < tokens_.size() ? tokens_[idx] : tokens_.back();
}

Token TokenStream::next() {
  Token tok = peek();
  if (pos_ < tokens_.size() - 1) ++pos_;
  return tok;
}

bool TokenStream::accept_punct(char c) {
  if (!peek().is_punct(c)) return false;
  next();
  return true;
}

bool TokenStream::accept_word(std::string_view word) {
  if (!peek().is_word(word)) return false;
  next();
  return true;
}

void TokenStream::expect_punct(char c) {
  if (!accept_punct(c)) {
    fail("expected '" + std::string(1, c) + "', found " + describe(peek()));
  }
}

void TokenStream::expect_word(std::string_view word) {
  if (!accept_word(word)) {
    fail("expected " + std::string(word) + ", found " + describe(peek()));
  }
}

void TokenStream::fail(const Token& at, const std::string& message,
                       ErrorCode code) const {
  throw SyntaxError(at.line, at.column, message, code);
}

std::string describe(const Token& token) {
  switch (token.kind) {
    case TokenKind::kIriRef: return "<" + token.text + ">";
    case TokenKind::kPrefixedName: return token.text + ":" + token.local;
    case TokenKind::kBlankLabel: return "_:" + token.text;
    case TokenKind::kVariable: return "?" + token.text;
    case TokenKind::kString: return "string literal";
    case TokenKind::kLangTag: return "@" + token.text;
    case TokenKind::kAtKeyword: return "@" + token.text;
    case TokenKind::kDoubleCaret: return "'^^'";
    case TokenKind::kNumber: return token.text;
    case TokenKind::kWord: return "'" + token.text + "'";
    case TokenKind::kPunct: return "'" + token.text + "'";
    case TokenKind::kEnd: return "end of input";
  }
  return "token";
}

namespace {

std::string remove_dot_segments(std::string_view path) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  bool absolute = !path.empty() && path[0] == '/';
  if (absolute) i = 1;
  bool trailing_slash = false;
  while (i <= path.size()) {
    std::size_t slash = path.find('/', i);
    std::string_view seg = path.substr(
        i, slash == std::string_view::npos ? std::string_view::npos : slash - i);
    bool last = slash == std::string_view::npos;
    if (seg == ".") {
      trailing_slash = last;
    } else if (seg == "..") {
      if (!out.empty()) out.pop_back();
      trailing_slash = last;
    } else {
      out.push_back(seg);
      trailing_slash = false;
    }
    if (last) break;
    i = slash + 1;
  }
  std::string result = absolute ? "/" : "";
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (k) result += '/';
    result += out[k];
  }
  if (trailing_slash) result += '/';
  return result;
}

}  // namespace

std::string resolve_iri(std::string_view base, std::string_view ref) {
  if (is_absolute_iri(ref)) return std::string(ref);
  std::size_t scheme_end = base.find(':');
  std::string_view scheme = base.substr(0, scheme_end + 1);
  std::string_view rest = base.substr(scheme_end + 1);
  std::string_view authority;
  std::string_view path = rest;
  if (rest.starts_with("//")) {
    std::size_t path_start = rest.find_first_of("/?#", 2);
    authority = rest.substr(0, path_start);
    path = path_start == std::string_view::npos ? std::string_view{}
                                                : rest.substr(path_start);
  }
  std::string_view base_path = path.substr(0, path.find_first_of("?#"));
  std::string_view base_query;
  if (auto q = path.find('?'); q != std::string_view::npos) {
    base_query = path.substr(q, path.find('#') - q);
  }

  if (ref.starts_with("//")) return std::string(scheme) + std::string(ref);
  if (ref.empty()) {
    return std::string(scheme) + std::string(authority) +
           std::string(base_path) + std::string(base_query);
  }
  if (ref[0] == '#') {
    return std::string(scheme) + std::string(authority) +
           std::string(base_path) + std::string(base_query) + std::string(ref);
  }
  if (ref[0] == '?') {
    return std::string(scheme) + std::string(authority) +
           std::string(base_path) + std::string(ref);
  }
  std::size_t suffix_at = ref.find_first_of("?#");
  std::string_view ref_path = ref.substr(0, suffix_at);
  std::string_view ref_suffix =
      suffix_at == std::string_view::npos ? std::string_view{} : ref.substr(suffix_at);
  std::string merged;
  if (ref_path.starts_with("/")) {
    merged = ref_path;
  } else if (!authority.empty() && base_path.empty()) {
    merged = "/" + std::string(ref_path);
  } else {
    std::size_t last_slash = base_path.rfind('/');
    merged = last_slash == std::string_view::npos
                 ? std::string(ref_path)
                 : std::string(base_path.substr(0, last_slash + 1)) +
                       std::string(ref_path);
  }
  return std::string(scheme) + std::string(authority) +
         remove_dot_segments(merged) + std::string(ref_suffix);
}

}  // namespace chrono_rdf::detail
