#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace coedit {

// The two subject languages. Side "a" of a project pair is Java, side "b" C#.
enum class Lang { Java, CSharp };

// Accepts "a"/"java" and "b"/"cs"/"csharp"/"c#".
std::optional<Lang> parse_lang(std::string_view text);
// Short machine name: "java" or "cs".
std::string_view lang_name(Lang lang) noexcept;
// Human label used in few-shot prompts: "Java" or "C#".
std::string_view lang_label(Lang lang) noexcept;

enum class TokenKind { Identifier, Keyword, Literal, Operator, Punctuation };

std::string_view to_string(TokenKind kind) noexcept;

struct Token {
  std::string text;
  TokenKind kind = TokenKind::Identifier;
  // 1-based source line of the first character; 0 when unknown. Ignored by
  // equality so re-lexed sequences compare equal to the originals.
  int line = 0;

  friend bool operator==(const Token& a, const Token& b) {
    return a.kind == b.kind && a.text == b.text;
  }
};

// Plain token texts. Edit scripts and metrics work on these.
using Tokens = std::vector<std::string>;

struct TokenSequence {
  Lang lang = Lang::Java;
  std::vector<Token> tokens;

  std::size_t size() const noexcept { return tokens.size(); }
  bool empty() const noexcept { return tokens.empty(); }
  Tokens texts() const;

  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;
};

struct SubtokenBag {
  std::map<std::string, std::size_t> counts;

  std::size_t size() const noexcept;
  friend bool operator==(const SubtokenBag&, const SubtokenBag&) = default;
};

// Lexes a method body or whole source file. Comments (and C# preprocessor
// lines) are dropped, literals stay single tokens. Throws
// Error(UnterminatedLiteral) on a string, char or block comment that never
// closes.
TokenSequence lex(std::string_view source, Lang lang);

// Rebuilds a sequence from bare token texts, classifying each text on its own.
// Never throws; texts the lexer would not produce as one token are kept
// verbatim as identifiers or operators.
TokenSequence from_texts(const Tokens& texts, Lang lang);

// Returns the end offset of the literal that starts at `pos`, or nullopt if no
// literal starts there. Throws Error(UnterminatedLiteral).
std::optional<std::size_t> literal_extent(std::string_view text, std::size_t pos,
                                          Lang lang);

// Single-space join. Original layout is not preserved.
std::string detokenize(const TokenSequence& seq);
std::string detokenize(const Tokens& tokens);

// Splits one identifier at camelCase, acronym and digit boundaries and
// lowercases the pieces: "parseHTML2Text" -> parse, html, 2, text.
std::vector<std::string> split_identifier(std::string_view identifier);

// Subtokens of a single token. Identifiers and keywords are split with
// split_identifier; string and char literal contents are split into words
// and then the same way; everything else is lowercased whole.
std::vector<std::string> subtokens(const Token& token);
// All subtokens of a sequence in source order.
std::vector<std::string> subtoken_list(const TokenSequence& seq);
SubtokenBag subtokenize(const TokenSequence& seq);

const std::set<std::string, std::less<>>& keywords(Lang lang);
bool is_identifier(std::string_view text, Lang lang);

}  // namespace coedit
