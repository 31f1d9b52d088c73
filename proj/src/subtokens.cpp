#include <numeric>

#include "coedit/token_model.hpp"

namespace coedit {

namespace {

bool is_upper(unsigned char c) { return c >= 'A' && c <= 'Z'; }
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }
// Non-ASCII bytes have no case here; they join lowercase runs.
bool is_lower(unsigned char c) { return (c >= 'a' && c <= 'z') || c >= 0x80; }

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (is_upper(static_cast<unsigned char>(c))) c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool is_string_literal(const Token& token) {
  if (token.kind != TokenKind::Literal || token.text.empty()) return false;
  const char c = token.text.front();
  return c == '"' || c == '\'' || c == '@' || c == '$';
}

}  // namespace

std::vector<std::string> split_identifier(std::string_view word) {
  std::vector<std::string> pieces;
  const auto at = [&](std::size_t k) { return static_cast<unsigned char>(word[k]); };
  std::size_t i = 0;
  while (i < word.size()) {
    const auto c = at(i);
    if (is_digit(c)) {
      std::size_t j = i;
      while (j < word.size() && is_digit(at(j))) ++j;
      pieces.emplace_back(word.substr(i, j - i));
      i = j;
    } else if (is_upper(c)) {
      std::size_t j = i;
      while (j < word.size() && is_upper(at(j))) ++j;
      if (j < word.size() && is_lower(at(j))) {
        // "HTMLParser": the last capital starts the next word.
        if (j - i > 1) pieces.push_back(to_lower(word.substr(i, j - 1 - i)));
        std::size_t k = j;
        while (k < word.size() && is_lower(at(k))) ++k;
        pieces.push_back(to_lower(word.substr(j - 1, k - (j - 1))));
        i = k;
      } else {
        pieces.push_back(to_lower(word.substr(i, j - i)));
        i = j;
      }
    } else if (is_lower(c)) {
      std::size_t j = i;
      while (j < word.size() && is_lower(at(j))) ++j;
      pieces.emplace_back(word.substr(i, j - i));
      i = j;
    } else {
      ++i;  // separators: '_', '$', '@', punctuation inside literals
    }
  }
  return pieces;
}

std::vector<std::string> subtokens(const Token& token) {
  switch (token.kind) {
    case TokenKind::Identifier:
    case TokenKind::Keyword:
      return split_identifier(token.text);
    case TokenKind::Literal:
      if (is_string_literal(token)) return split_identifier(token.text);
      return {to_lower(token.text)};
    case TokenKind::Operator:
    case TokenKind::Punctuation:
      break;
  }
  return {to_lower(token.text)};
}

std::vector<std::string> subtoken_list(const TokenSequence& seq) {
  std::vector<std::string> out;
  for (const auto& token : seq.tokens) {
    auto pieces = subtokens(token);
    out.insert(out.end(), std::make_move_iterator(pieces.begin()),
               std::make_move_iterator(pieces.end()));
  }
  return out;
}

SubtokenBag subtokenize(const TokenSequence& seq) {
  SubtokenBag bag;
  for (auto& piece : subtoken_list(seq)) ++bag.counts[std::move(piece)];
  return bag;
}

std::size_t SubtokenBag::size() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0},
                         [](std::size_t acc, const auto& kv) { return acc + kv.second; });
}

}  // namespace coedit
