#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace coedit {

enum class OpTag { Equal, Replace, Delete, Insert };

// Half-open ranges a[i1, i2) -> b[j1, j2), as returned by difflib's
// SequenceMatcher.get_opcodes().
struct Opcode {
  OpTag tag;
  std::size_t i1, i2, j1, j2;

  friend bool operator==(const Opcode&, const Opcode&) = default;
};

struct MatchingBlock {
  std::size_t a, b, size;

  friend bool operator==(const MatchingBlock&, const MatchingBlock&) = default;
};

// Longest-contiguous-matching-block alignment (Ratcliff/Obershelp) with no
// junk filter and no popularity heuristic. Results are identical to
// difflib.SequenceMatcher(None, a, b, autojunk=False).
class SequenceMatcher {
 public:
  SequenceMatcher(std::span<const int> a, std::span<const int> b);

  // Longest block in a[alo, ahi) x b[blo, bhi); earliest in a, then in b.
  MatchingBlock find_longest_match(std::size_t alo, std::size_t ahi, std::size_t blo,
                                   std::size_t bhi);
  // Terminated by the sentinel {a.size(), b.size(), 0}.
  std::vector<MatchingBlock> matching_blocks();
  std::vector<Opcode> opcodes();

 private:
  std::span<const int> a_;
  std::span<const int> b_;
  std::vector<std::vector<std::size_t>> b2j_;
  std::vector<std::size_t> j2len_;
  std::vector<std::size_t> new_j2len_;
};

// Maps both token lists onto dense integer ids (shared dictionary).
void intern_tokens(const std::vector<std::string>& a, const std::vector<std::string>& b,
                   std::vector<int>& a_ids, std::vector<int>& b_ids);

std::vector<Opcode> opcodes(const std::vector<std::string>& a,
                            const std::vector<std::string>& b);

}  // namespace coedit
