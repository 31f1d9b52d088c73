#include <algorithm>
#include <array>
#include <cctype>

#include "coedit/error.hpp"
#include "coedit/token_model.hpp"

namespace coedit {

namespace {

bool is_ascii_alpha(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

// Non-ASCII bytes are treated as identifier characters; this accepts UTF-8
// letters without a Unicode table.
bool is_ident_start(unsigned char c, Lang lang) {
  return is_ascii_alpha(c) || c == '_' || c >= 0x80 || (lang == Lang::Java && c == '$');
}
bool is_ident_part(unsigned char c, Lang lang) {
  return is_ident_start(c, lang) || is_digit(c);
}
bool is_space(unsigned char c) { return c <= ' ' || c == 0x7f; }

constexpr std::array kJavaOperators = {
    std::string_view{">>>="}, std::string_view{"<<="}, std::string_view{">>="},
    std::string_view{"..."},  std::string_view{"->"},  std::string_view{"::"},
    std::string_view{"++"},   std::string_view{"--"},  std::string_view{"&&"},
    std::string_view{"||"},   std::string_view{"=="},  std::string_view{"!="},
    std::string_view{"<="},   std::string_view{">="},  std::string_view{"+="},
    std::string_view{"-="},   std::string_view{"*="},  std::string_view{"/="},
    std::string_view{"&="},   std::string_view{"|="},  std::string_view{"^="},
    std::string_view{"%="},   std::string_view{"<<"},
};

// ">>" is deliberately absent in both languages: closing generic brackets
// stay separate tokens, as in the Antlr-derived lexers.
constexpr std::array kCSharpOperators = {
    std::string_view{">>>="}, std::string_view{"<<="}, std::string_view{">>="},
    std::string_view{"?\?="},  std::string_view{"??"},  std::string_view{"=>"},
    std::string_view{"::"},   std::string_view{"->"},  std::string_view{"++"},
    std::string_view{"--"},   std::string_view{"&&"},  std::string_view{"||"},
    std::string_view{"=="},   std::string_view{"!="},  std::string_view{"<="},
    std::string_view{">="},   std::string_view{"+="},  std::string_view{"-="},
    std::string_view{"*="},   std::string_view{"/="},  std::string_view{"&="},
    std::string_view{"|="},   std::string_view{"^="},  std::string_view{"%="},
    std::string_view{"<<"},   std::string_view{".."},
};

constexpr std::string_view kPunctuation = "(){}[];,.";

constexpr std::array kDirectives = {
    std::string_view{"if"},     std::string_view{"elif"},    std::string_view{"else"},
    std::string_view{"endif"},  std::string_view{"define"},  std::string_view{"undef"},
    std::string_view{"region"}, std::string_view{"endregion"}, std::string_view{"pragma"},
    std::string_view{"nullable"}, std::string_view{"line"},  std::string_view{"error"},
    std::string_view{"warning"},
};

[[noreturn]] void unterminated(std::string_view what, std::size_t pos) {
  throw Error(ErrorCode::UnterminatedLiteral,
              std::string(what) + " starting at offset " + std::to_string(pos) +
                  " never closes",
              pos);
}

// Quoted literal with backslash escapes: "..." or '...'.
std::size_t escaped_end(std::string_view s, std::size_t pos, char quote) {
  std::size_t i = pos + 1;
  while (i < s.size()) {
    if (s[i] == '\\') {
      i += 2;
    } else if (s[i] == quote) {
      return i + 1;
    } else {
      ++i;
    }
  }
  unterminated(quote == '"' ? "string literal" : "char literal", pos);
}

std::size_t java_text_block_end(std::string_view s, std::size_t pos) {
  std::size_t i = pos + 3;
  while (i < s.size()) {
    if (s[i] == '\\') {
      i += 2;
    } else if (s.compare(i, 3, R"(""")") == 0) {
      return i + 3;
    } else {
      ++i;
    }
  }
  unterminated("text block", pos);
}

std::size_t csharp_literal_end(std::string_view s, std::size_t pos);

// Skips an interpolation hole "{...}" starting at `pos` (which holds '{').
std::size_t interpolation_hole_end(std::string_view s, std::size_t pos) {
  int depth = 0;
  std::size_t i = pos;
  while (i < s.size()) {
    const char c = s[i];
    if (c == '{') {
      ++depth;
      ++i;
    } else if (c == '}') {
      --depth;
      ++i;
      if (depth == 0) return i;
    } else if (c == '"' || c == '\'' || c == '@' || c == '$') {
      const auto end = csharp_literal_end(s, i);
      i = end == std::string_view::npos ? i + 1 : end;
    } else {
      ++i;
    }
  }
  unterminated("interpolated string", pos);
}

// Returns npos if no C# literal starts at pos.
std::size_t csharp_literal_end(std::string_view s, std::size_t pos) {
  std::size_t i = pos;
  bool verbatim = false;
  bool interpolated = false;
  while (i < s.size() && (s[i] == '@' || s[i] == '$')) {
    if (s[i] == '@') {
      if (verbatim) return std::string_view::npos;
      verbatim = true;
    } else {
      interpolated = true;
    }
    ++i;
  }
  if (i >= s.size()) return std::string_view::npos;
  if (s[i] == '\'' && i == pos) return escaped_end(s, pos, '\'');
  if (s[i] != '"') return std::string_view::npos;

  // Raw string literal: three or more quotes, closed by the same run.
  if (!verbatim && s.compare(i, 3, R"(""")") == 0) {
    std::size_t quotes = 0;
    while (i + quotes < s.size() && s[i + quotes] == '"') ++quotes;
    std::size_t j = i + quotes;
    while (j < s.size()) {
      if (s[j] == '"') {
        std::size_t run = 0;
        while (j + run < s.size() && s[j + run] == '"') ++run;
        if (run >= quotes) return j + run;
        j += run;
      } else {
        ++j;
      }
    }
    unterminated("raw string literal", pos);
  }

  std::size_t j = i + 1;
  while (j < s.size()) {
    const char c = s[j];
    if (verbatim && c == '"') {
      if (j + 1 < s.size() && s[j + 1] == '"') {
        j += 2;
        continue;
      }
      return j + 1;
    }
    if (!verbatim && c == '\\') {
      j += 2;
      continue;
    }
    if (!verbatim && c == '"') return j + 1;
    if (interpolated && c == '{') {
      if (j + 1 < s.size() && s[j + 1] == '{') {
        j += 2;
        continue;
      }
      j = interpolation_hole_end(s, j);
      continue;
    }
    ++j;
  }
  unterminated("string literal", pos);
}

std::size_t number_end(std::string_view s, std::size_t pos, Lang lang) {
  std::size_t i = pos;
  const auto at = [&](std::size_t k) -> unsigned char {
    return k < s.size() ? static_cast<unsigned char>(s[k]) : 0;
  };
  const auto digits = [&] {
    while (is_digit(at(i)) || at(i) == '_') ++i;
  };
  const auto suffix = [&] {
    while (is_ascii_alpha(at(i)) || is_digit(at(i)) || at(i) == '_') ++i;
  };
  if (at(i) == '0' && (at(i + 1) == 'x' || at(i + 1) == 'X')) {
    i += 2;
    while (std::isxdigit(at(i)) || at(i) == '_') ++i;
    if ((at(i) == 'p' || at(i) == 'P') &&
        (is_digit(at(i + 1)) || ((at(i + 1) == '+' || at(i + 1) == '-') && is_digit(at(i + 2))))) {
      i += 2;
      digits();
    }
    suffix();
    return i;
  }
  if (at(i) == '.') {
    ++i;
    digits();
  } else {
    digits();
    // Java accepts "1.", "1.f" and "1.e5"; C# needs a digit after the dot,
    // since "1.ToString()" is member access.
    const auto java_dot = [&] {
      const auto next = at(i + 1);
      if (!is_ident_start(next, lang)) return next != '.';
      const bool suffix_letter = next == 'f' || next == 'F' || next == 'd' || next == 'D';
      const bool exponent = (next == 'e' || next == 'E') &&
                            (is_digit(at(i + 2)) || at(i + 2) == '+' || at(i + 2) == '-');
      return (suffix_letter && !is_ident_part(at(i + 2), lang)) || exponent;
    };
    if (at(i) == '.' && (is_digit(at(i + 1)) || (lang == Lang::Java && java_dot()))) {
      ++i;
      digits();
    }
  }
  if ((at(i) == 'e' || at(i) == 'E') &&
      (is_digit(at(i + 1)) || ((at(i + 1) == '+' || at(i + 1) == '-') && is_digit(at(i + 2))))) {
    i += 2;
    digits();
  }
  suffix();
  return i;
}

class Lexer {
 public:
  Lexer(std::string_view source, Lang lang) : src_(source), lang_(lang) {}

  TokenSequence run() {
    TokenSequence out;
    out.lang = lang_;
    bool line_start = true;
    while (pos_ < src_.size()) {
      const auto c = static_cast<unsigned char>(src_[pos_]);
      if (c == '\n') {
        ++line_;
        ++pos_;
        line_start = true;
        continue;
      }
      if (is_space(c)) {
        ++pos_;
        continue;
      }
      if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
        continue;
      }
      if (c == '/' && peek(1) == '*') {
        const auto end = src_.find("*/", pos_ + 2);
        if (end == std::string_view::npos) unterminated("block comment", pos_);
        advance_to(end + 2);
        continue;
      }
      if (lang_ == Lang::CSharp && c == '#' && line_start && is_directive()) {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
        continue;
      }
      line_start = false;

      if (const auto end = literal_extent(src_, pos_, lang_)) {
        emit(*end, TokenKind::Literal);
        continue;
      }
      if (is_ident_start(c, lang_) ||
          (lang_ == Lang::CSharp && c == '@' && is_ident_start(peek(1), lang_))) {
        std::size_t end = pos_ + 1;
        while (end < src_.size() && is_ident_part(static_cast<unsigned char>(src_[end]), lang_)) {
          ++end;
        }
        const auto word = src_.substr(pos_, end - pos_);
        TokenKind kind = TokenKind::Identifier;
        if (word == "true" || word == "false" || word == "null") {
          kind = TokenKind::Literal;
        } else if (keywords(lang_).contains(word)) {
          kind = TokenKind::Keyword;
        }
        emit(end, kind);
        continue;
      }
      if (is_digit(c) || (c == '.' && is_digit(peek(1)))) {
        emit(number_end(src_, pos_, lang_), TokenKind::Literal);
        continue;
      }
      emit_operator();
    }
    return out_with(std::move(out));
  }

 private:
  unsigned char peek(std::size_t ahead) const {
    return pos_ + ahead < src_.size() ? static_cast<unsigned char>(src_[pos_ + ahead]) : 0;
  }

  bool is_directive() const {
    std::size_t i = pos_ + 1;
    while (i < src_.size() && (src_[i] == ' ' || src_[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < src_.size() && is_ascii_alpha(static_cast<unsigned char>(src_[j]))) ++j;
    const auto word = src_.substr(i, j - i);
    return std::find(kDirectives.begin(), kDirectives.end(), word) != kDirectives.end();
  }

  void advance_to(std::size_t end) {
    line_ += static_cast<int>(std::count(src_.begin() + static_cast<std::ptrdiff_t>(pos_),
                                         src_.begin() + static_cast<std::ptrdiff_t>(end), '\n'));
    pos_ = end;
  }

  void emit(std::size_t end, TokenKind kind) {
    tokens_.push_back(Token{std::string(src_.substr(pos_, end - pos_)), kind, line_});
    advance_to(end);
  }

  void emit_operator() {
    const auto rest = src_.substr(pos_);
    const auto try_list = [&](const auto& ops) -> std::size_t {
      for (const auto op : ops) {
        if (rest.starts_with(op)) return op.size();
      }
      return 0;
    };
    std::size_t len = lang_ == Lang::Java ? try_list(kJavaOperators) : try_list(kCSharpOperators);
    // "?." stays two tokens, as in Roslyn.
    if (len == 0) len = 1;
    const auto kind = (len == 1 && kPunctuation.find(rest[0]) != std::string_view::npos)
                          ? TokenKind::Punctuation
                          : TokenKind::Operator;
    emit(pos_ + len, kind);
  }

  TokenSequence out_with(TokenSequence out) {
    out.tokens = std::move(tokens_);
    return out;
  }

  std::string_view src_;
  Lang lang_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::vector<Token> tokens_;
};

}  // namespace

std::optional<std::size_t> literal_extent(std::string_view text, std::size_t pos, Lang lang) {
  if (pos >= text.size()) return std::nullopt;
  const char c = text[pos];
  if (lang == Lang::Java) {
    if (c == '"') {
      if (text.compare(pos, 3, R"(""")") == 0) return java_text_block_end(text, pos);
      return escaped_end(text, pos, '"');
    }
    if (c == '\'') return escaped_end(text, pos, '\'');
    return std::nullopt;
  }
  if (c != '"' && c != '\'' && c != '@' && c != '$') return std::nullopt;
  const auto end = csharp_literal_end(text, pos);
  if (end == std::string_view::npos) return std::nullopt;
  return end;
}

TokenSequence lex(std::string_view source, Lang lang) { return Lexer(source, lang).run(); }

TokenSequence from_texts(const Tokens& texts, Lang lang) {
  TokenSequence out;
  out.lang = lang;
  out.tokens.reserve(texts.size());
  for (const auto& text : texts) {
    Token token{text, TokenKind::Identifier, 0};
    try {
      auto single = lex(text, lang);
      if (single.tokens.size() == 1 && single.tokens.front().text == text) {
        token.kind = single.tokens.front().kind;
      } else if (!text.empty() && !is_ident_start(static_cast<unsigned char>(text[0]), lang)) {
        token.kind = TokenKind::Operator;
      }
    } catch (const Error&) {
      token.kind = TokenKind::Literal;
    }
    out.tokens.push_back(std::move(token));
  }
  return out;
}

bool is_identifier(std::string_view text, Lang lang) {
  if (text.empty()) return false;
  std::size_t i = 0;
  if (lang == Lang::CSharp && text[0] == '@') i = 1;
  if (i >= text.size() || !is_ident_start(static_cast<unsigned char>(text[i]), lang)) return false;
  for (++i; i < text.size(); ++i) {
    if (!is_ident_part(static_cast<unsigned char>(text[i]), lang)) return false;
  }
  return !keywords(lang).contains(text);
}

std::optional<Lang> parse_lang(std::string_view text) {
  if (text == "a" || text == "java" || text == "Java") return Lang::Java;
  if (text == "b" || text == "cs" || text == "csharp" || text == "c#" || text == "C#") {
    return Lang::CSharp;
  }
  return std::nullopt;
}

std::string_view lang_name(Lang lang) noexcept { return lang == Lang::Java ? "java" : "cs"; }
std::string_view lang_label(Lang lang) noexcept { return lang == Lang::Java ? "Java" : "C#"; }

std::string_view to_string(TokenKind kind) noexcept {
  switch (kind) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Literal: return "literal";
    case TokenKind::Operator: return "operator";
    case TokenKind::Punctuation: return "punctuation";
  }
  return "identifier";
}

Tokens TokenSequence::texts() const {
  Tokens out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.text);
  return out;
}

std::string detokenize(const Tokens& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

std::string detokenize(const TokenSequence& seq) { return detokenize(seq.texts()); }

const std::set<std::string, std::less<>>& keywords(Lang lang) {
  static const std::set<std::string, std::less<>> java = {
      "abstract", "assert",     "boolean",   "break",     "byte",      "case",
      "catch",    "char",       "class",     "const",     "continue",  "default",
      "do",       "double",     "else",      "enum",      "extends",   "final",
      "finally",  "float",      "for",       "goto",      "if",        "implements",
      "import",   "instanceof", "int",       "interface", "long",      "native",
      "new",      "package",    "private",   "protected", "public",    "return",
      "short",    "static",     "strictfp",  "super",     "switch",    "synchronized",
      "this",     "throw",      "throws",    "transient", "try",       "void",
      "volatile", "while",      "var",       "record",    "yield",     "true",
      "false",    "null",
  };
  static const std::set<std::string, std::less<>> csharp = {
      "abstract",  "as",       "base",     "bool",      "break",    "byte",
      "case",      "catch",    "char",     "checked",   "class",    "const",
      "continue",  "decimal",  "default",  "delegate",  "do",       "double",
      "else",      "enum",     "event",    "explicit",  "extern",   "false",
      "finally",   "fixed",    "float",    "for",       "foreach",  "goto",
      "if",        "implicit", "in",       "int",       "interface", "internal",
      "is",        "lock",     "long",     "namespace", "new",      "null",
      "object",    "operator", "out",      "override",  "params",   "private",
      "protected", "public",   "readonly", "ref",       "return",   "sbyte",
      "sealed",    "short",    "sizeof",   "stackalloc", "static",  "string",
      "struct",    "switch",   "this",     "throw",     "true",     "try",
      "typeof",    "uint",     "ulong",    "unchecked", "unsafe",   "ushort",
      "using",     "virtual",  "void",     "volatile",  "while",    "var",
  };
  return lang == Lang::Java ? java : csharp;
}

}  // namespace coedit
