#include "coedit/sequence_matcher.hpp"

#include <algorithm>
#include <tuple>
#include <unordered_map>

namespace coedit {

SequenceMatcher::SequenceMatcher(std::span<const int> a, std::span<const int> b)
    : a_(a), b_(b), j2len_(b.size() + 1, 0), new_j2len_(b.size() + 1, 0) {
  int max_id = -1;
  for (int id : a) max_id = std::max(max_id, id);
  for (int id : b) max_id = std::max(max_id, id);
  b2j_.resize(static_cast<std::size_t>(max_id + 1));
  for (std::size_t j = 0; j < b.size(); ++j) b2j_[static_cast<std::size_t>(b[j])].push_back(j);
}

MatchingBlock SequenceMatcher::find_longest_match(std::size_t alo, std::size_t ahi,
                                                  std::size_t blo, std::size_t bhi) {
  std::size_t best_i = alo;
  std::size_t best_j = blo;
  std::size_t best_size = 0;
  // j2len_[j + 1] holds the length of the match ending at a[i - 1], b[j].
  // Entries touched in the previous row are tracked so clearing stays
  // proportional to the work done.
  std::vector<std::size_t> touched;
  std::vector<std::size_t> new_touched;
  for (std::size_t i = alo; i < ahi; ++i) {
    new_touched.clear();
    for (std::size_t j : b2j_[static_cast<std::size_t>(a_[i])]) {
      if (j < blo) continue;
      if (j >= bhi) break;
      const std::size_t k = j2len_[j] + 1;
      new_j2len_[j + 1] = k;
      new_touched.push_back(j + 1);
      if (k > best_size) {
        best_i = i + 1 - k;
        best_j = j + 1 - k;
        best_size = k;
      }
    }
    for (std::size_t t : touched) j2len_[t] = 0;
    for (std::size_t t : new_touched) {
      j2len_[t] = new_j2len_[t];
      new_j2len_[t] = 0;
    }
    std::swap(touched, new_touched);
  }
  for (std::size_t t : touched) j2len_[t] = 0;

  // With no junk these extensions never fire; kept for parity with difflib.
  while (best_i > alo && best_j > blo && a_[best_i - 1] == b_[best_j - 1]) {
    --best_i;
    --best_j;
    ++best_size;
  }
  while (best_i + best_size < ahi && best_j + best_size < bhi &&
         a_[best_i + best_size] == b_[best_j + best_size]) {
    ++best_size;
  }
  return {best_i, best_j, best_size};
}

std::vector<MatchingBlock> SequenceMatcher::matching_blocks() {
  const std::size_t la = a_.size();
  const std::size_t lb = b_.size();
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>> queue{
      {0, la, 0, lb}};
  std::vector<MatchingBlock> blocks;
  while (!queue.empty()) {
    const auto [alo, ahi, blo, bhi] = queue.back();
    queue.pop_back();
    const auto m = find_longest_match(alo, ahi, blo, bhi);
    if (m.size == 0) continue;
    blocks.push_back(m);
    if (alo < m.a && blo < m.b) queue.emplace_back(alo, m.a, blo, m.b);
    if (m.a + m.size < ahi && m.b + m.size < bhi) {
      queue.emplace_back(m.a + m.size, ahi, m.b + m.size, bhi);
    }
  }
  std::sort(blocks.begin(), blocks.end(), [](const MatchingBlock& x, const MatchingBlock& y) {
    return std::tie(x.a, x.b, x.size) < std::tie(y.a, y.b, y.size);
  });

  std::vector<MatchingBlock> merged;
  MatchingBlock cur{0, 0, 0};
  for (const auto& blk : blocks) {
    if (cur.a + cur.size == blk.a && cur.b + cur.size == blk.b) {
      cur.size += blk.size;
    } else {
      if (cur.size) merged.push_back(cur);
      cur = blk;
    }
  }
  if (cur.size) merged.push_back(cur);
  merged.push_back({la, lb, 0});
  return merged;
}

std::vector<Opcode> SequenceMatcher::opcodes() {
  std::vector<Opcode> out;
  std::size_t i = 0;
  std::size_t j = 0;
  for (const auto& blk : matching_blocks()) {
    if (i < blk.a && j < blk.b) {
      out.push_back({OpTag::Replace, i, blk.a, j, blk.b});
    } else if (i < blk.a) {
      out.push_back({OpTag::Delete, i, blk.a, j, blk.b});
    } else if (j < blk.b) {
      out.push_back({OpTag::Insert, i, blk.a, j, blk.b});
    }
    i = blk.a + blk.size;
    j = blk.b + blk.size;
    if (blk.size) out.push_back({OpTag::Equal, blk.a, i, blk.b, j});
  }
  return out;
}

void intern_tokens(const std::vector<std::string>& a, const std::vector<std::string>& b,
                   std::vector<int>& a_ids, std::vector<int>& b_ids) {
  std::unordered_map<std::string_view, int> ids;
  const auto id_of = [&](const std::string& s) {
    auto [it, inserted] = ids.try_emplace(s, static_cast<int>(ids.size()));
    return it->second;
  };
  a_ids.clear();
  b_ids.clear();
  a_ids.reserve(a.size());
  b_ids.reserve(b.size());
  for (const auto& s : a) a_ids.push_back(id_of(s));
  for (const auto& s : b) b_ids.push_back(id_of(s));
}

std::vector<Opcode> opcodes(const std::vector<std::string>& a,
                            const std::vector<std::string>& b) {
  std::vector<int> a_ids;
  std::vector<int> b_ids;
  intern_tokens(a, b, a_ids, b_ids);
  return SequenceMatcher(a_ids, b_ids).opcodes();
}

}  // namespace coedit
