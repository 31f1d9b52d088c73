#include "coedit/edit_script.hpp"

#include <algorithm>
#include <numeric>

#include "coedit/error.hpp"
#include "coedit/sequence_matcher.hpp"

namespace coedit {

std::string_view to_string(EditOp op) noexcept {
  switch (op) {
    case EditOp::Insert: return "Insert";
    case EditOp::Delete: return "Delete";
    case EditOp::Replace: return "Replace";
    case EditOp::ReplaceKeepBefore: return "ReplaceKeepBefore";
    case EditOp::ReplaceKeepAfter: return "ReplaceKeepAfter";
  }
  return "Replace";
}

std::string_view to_string(ScriptForm form) noexcept {
  return form == ScriptForm::Concise ? "concise" : "unambiguous";
}

EditScript diff(const Tokens& old_tokens, const Tokens& new_tokens) {
  EditScript script{ScriptForm::Concise, {}};
  for (const auto& op : opcodes(old_tokens, new_tokens)) {
    if (op.tag == OpTag::Equal) continue;
    Edit e;
    e.op = op.tag == OpTag::Insert   ? EditOp::Insert
           : op.tag == OpTag::Delete ? EditOp::Delete
                                     : EditOp::Replace;
    e.old_span.assign(old_tokens.begin() + static_cast<std::ptrdiff_t>(op.i1),
                      old_tokens.begin() + static_cast<std::ptrdiff_t>(op.i2));
    e.new_span.assign(new_tokens.begin() + static_cast<std::ptrdiff_t>(op.j1),
                      new_tokens.begin() + static_cast<std::ptrdiff_t>(op.j2));
    e.old_begin = op.i1;
    script.edits.push_back(std::move(e));
  }
  return script;
}

EditScript diff(const TokenSequence& old_seq, const TokenSequence& new_seq) {
  if (old_seq.lang != new_seq.lang) {
    throw Error(ErrorCode::InvalidArgument, "diff across languages");
  }
  return diff(old_seq.texts(), new_seq.texts());
}

std::size_t count_occurrences(const Tokens& haystack, const Tokens& needle, std::size_t limit) {
  if (needle.empty()) return std::min(haystack.size() + 1, limit);
  std::size_t found = 0;
  auto it = haystack.begin();
  while (found < limit) {
    it = std::search(it, haystack.end(), needle.begin(), needle.end());
    if (it == haystack.end()) break;
    ++found;
    ++it;
  }
  return found;
}

namespace {

// Occurrence counting over interned ids, used on the hot path of anchor search.
class SpanIndex {
 public:
  explicit SpanIndex(const Tokens& tokens) {
    std::vector<int> unused;
    intern_tokens(tokens, {}, ids_, unused);
  }

  std::size_t size() const { return ids_.size(); }

  bool unique(std::size_t begin, std::size_t end) const {
    const std::size_t len = end - begin;
    if (len == 0) return ids_.empty();
    std::size_t found = 0;
    for (std::size_t p = 0; p + len <= ids_.size(); ++p) {
      if (ids_[p] != ids_[begin]) continue;
      if (std::equal(ids_.begin() + static_cast<std::ptrdiff_t>(p),
                     ids_.begin() + static_cast<std::ptrdiff_t>(p + len),
                     ids_.begin() + static_cast<std::ptrdiff_t>(begin))) {
        if (++found > 1) return false;
      }
    }
    return found == 1;
  }

 private:
  std::vector<int> ids_;
};

// One concise edit (or a merge of several) located in the old sequence.
struct Region {
  std::size_t begin;
  std::size_t end;
  Tokens replacement;
  EditOp op;
  bool merged = false;
};

struct Anchored {
  std::size_t begin;  // extent in old, anchors included
  std::size_t end;
  Edit edit;
};

Tokens slice(const Tokens& t, std::size_t b, std::size_t e) {
  return Tokens(t.begin() + static_cast<std::ptrdiff_t>(b),
                t.begin() + static_cast<std::ptrdiff_t>(e));
}

Tokens concat(Tokens a, const Tokens& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Anchored make_anchored(const Tokens& old, EditOp op, std::size_t begin, std::size_t end,
                       Tokens new_span) {
  Edit e{op, slice(old, begin, end), std::move(new_span), begin};
  return {begin, end, std::move(e)};
}

// `lo` and `hi` bound the context: the core end of the previous region and
// the core begin of the next one.
std::optional<Anchored> anchor_region(const Region& r, const Tokens& old, const SpanIndex& index,
                                      std::size_t lo, std::size_t hi) {
  if (r.op != EditOp::Insert && index.unique(r.begin, r.end)) {
    return make_anchored(old, r.op == EditOp::Delete ? EditOp::Delete : EditOp::Replace, r.begin,
                         r.end, r.replacement);
  }
  const std::size_t max_before = r.begin - lo;
  const std::size_t max_after = hi - r.end;
  if (!r.merged) {
    for (std::size_t k = 1; k <= max_before; ++k) {
      if (index.unique(r.begin - k, r.end)) {
        return make_anchored(old, EditOp::ReplaceKeepBefore, r.begin - k, r.end,
                             concat(slice(old, r.begin - k, r.begin), r.replacement));
      }
    }
    for (std::size_t k = 1; k <= max_after; ++k) {
      if (index.unique(r.begin, r.end + k)) {
        return make_anchored(old, EditOp::ReplaceKeepAfter, r.begin, r.end + k,
                             concat(r.replacement, slice(old, r.end, r.end + k)));
      }
    }
  }
  // Shortest two-sided context, before-heavy first. Merged regions go
  // straight here so that every KeepBefore/KeepAfter anchor is exactly the
  // common prefix/suffix of its spans.
  const std::size_t min_before = r.merged ? 0 : 1;
  const std::size_t min_after = r.merged ? 0 : 1;
  for (std::size_t total = min_before + min_after; total <= max_before + max_after; ++total) {
    const std::size_t b_hi = std::min(total - min_after, max_before);
    const std::size_t b_lo = total > max_after ? std::max(min_before, total - max_after) : min_before;
    for (std::size_t b = b_hi + 1; b-- > b_lo;) {
      const std::size_t a = total - b;
      if (a < min_after || a > max_after) continue;
      if (total == 0 && r.op == EditOp::Insert) continue;
      if (index.unique(r.begin - b, r.end + a)) {
        Tokens repl = concat(concat(slice(old, r.begin - b, r.begin), r.replacement),
                             slice(old, r.end, r.end + a));
        const EditOp op = repl.empty() ? EditOp::Delete : EditOp::Replace;
        return make_anchored(old, op, r.begin - b, r.end + a, std::move(repl));
      }
    }
  }
  return std::nullopt;
}

Region merge(const Region& x, const Region& y, const Tokens& old) {
  Region m{x.begin, y.end, concat(concat(x.replacement, slice(old, x.end, y.begin)), y.replacement),
           EditOp::Replace, true};
  if (m.begin == m.end) {
    m.op = EditOp::Insert;
  } else if (m.replacement.empty()) {
    m.op = EditOp::Delete;
  }
  return m;
}

}  // namespace

EditScript disambiguate(const EditScript& concise, const Tokens& old) {
  std::vector<Region> regions;
  regions.reserve(concise.edits.size());
  for (const auto& e : concise.edits) {
    if (!e.old_begin) {
      throw Error(ErrorCode::InvalidArgument, "disambiguate needs edit positions (use diff())");
    }
    const std::size_t begin = *e.old_begin;
    const std::size_t end = begin + e.old_span.size();
    if (end > old.size() || !std::equal(e.old_span.begin(), e.old_span.end(),
                                        old.begin() + static_cast<std::ptrdiff_t>(begin))) {
      throw Error(ErrorCode::InvalidArgument, "edit does not match the old sequence");
    }
    if (!regions.empty() && begin < regions.back().end) {
      throw Error(ErrorCode::OverlappingEdits, "concise edits overlap");
    }
    regions.push_back({begin, end, e.new_span, e.op});
  }

  const SpanIndex index(old);
  for (;;) {
    std::vector<Anchored> out;
    std::optional<std::size_t> failed;
    std::optional<std::size_t> overlap;
    for (std::size_t i = 0; i < regions.size(); ++i) {
      const std::size_t lo = i == 0 ? 0 : regions[i - 1].end;
      const std::size_t hi = i + 1 < regions.size() ? regions[i + 1].begin : old.size();
      auto anchored = anchor_region(regions[i], old, index, lo, hi);
      if (!anchored) {
        failed = i;
        break;
      }
      if (!out.empty() && out.back().end > anchored->begin) {
        overlap = i;
        break;
      }
      out.push_back(std::move(*anchored));
    }
    if (!failed && !overlap) {
      EditScript result{ScriptForm::Unambiguous, {}};
      result.edits.reserve(out.size());
      for (auto& a : out) result.edits.push_back(std::move(a.edit));
      return result;
    }
    if (regions.size() == 1) {
      throw Error(ErrorCode::NoUniqueAnchor, "no unique anchor exists for the edit");
    }
    std::size_t i = overlap ? *overlap - 1 : *failed;
    if (i + 1 >= regions.size()) --i;
    regions[i] = merge(regions[i], regions[i + 1], old);
    regions.erase(regions.begin() + static_cast<std::ptrdiff_t>(i + 1));
  }
}

Tokens apply(const EditScript& script, const Tokens& old) {
  struct Located {
    std::size_t begin;
    const Edit* edit;
  };
  std::vector<Located> located;
  located.reserve(script.edits.size());
  for (const auto& e : script.edits) {
    if (e.op == EditOp::Insert) {
      throw Error(ErrorCode::InvalidArgument, "an Insert edit carries no location");
    }
    std::vector<std::size_t> hits;
    if (e.old_span.empty()) {
      if (!old.empty()) {
        throw Error(ErrorCode::AmbiguousAnchor, "empty span matches every position");
      }
      hits.push_back(0);
    } else {
      auto it = old.begin();
      while (hits.size() < 2) {
        it = std::search(it, old.end(), e.old_span.begin(), e.old_span.end());
        if (it == old.end()) break;
        hits.push_back(static_cast<std::size_t>(it - old.begin()));
        ++it;
      }
    }
    if (hits.empty()) {
      throw Error(ErrorCode::AnchorNotFound, "span not found: " + detokenize(e.old_span));
    }
    if (hits.size() > 1) {
      throw Error(ErrorCode::AmbiguousAnchor, "span occurs more than once: " + detokenize(e.old_span));
    }
    located.push_back({hits.front(), &e});
  }
  std::stable_sort(located.begin(), located.end(),
                   [](const Located& x, const Located& y) { return x.begin < y.begin; });

  Tokens out;
  out.reserve(old.size());
  std::size_t cursor = 0;
  for (const auto& [begin, edit] : located) {
    if (begin < cursor) throw Error(ErrorCode::OverlappingEdits, "edits overlap");
    out.insert(out.end(), old.begin() + static_cast<std::ptrdiff_t>(cursor),
               old.begin() + static_cast<std::ptrdiff_t>(begin));
    out.insert(out.end(), edit->new_span.begin(), edit->new_span.end());
    cursor = begin + edit->old_span.size();
  }
  out.insert(out.end(), old.begin() + static_cast<std::ptrdiff_t>(cursor), old.end());
  return out;
}

TokenSequence apply(const EditScript& script, const TokenSequence& old_seq) {
  return from_texts(coedit::apply(script, old_seq.texts()), old_seq.lang);
}

Tokens replay(const EditScript& script, const Tokens& old) {
  Tokens out;
  std::size_t cursor = 0;
  for (const auto& e : script.edits) {
    if (!e.old_begin) throw Error(ErrorCode::InvalidArgument, "edit has no recorded position");
    const std::size_t begin = *e.old_begin;
    const std::size_t end = begin + e.old_span.size();
    if (begin < cursor || end > old.size() ||
        !std::equal(e.old_span.begin(), e.old_span.end(),
                    old.begin() + static_cast<std::ptrdiff_t>(begin))) {
      throw Error(ErrorCode::InvalidArgument, "edit position does not match the sequence");
    }
    out.insert(out.end(), old.begin() + static_cast<std::ptrdiff_t>(cursor),
               old.begin() + static_cast<std::ptrdiff_t>(begin));
    out.insert(out.end(), e.new_span.begin(), e.new_span.end());
    cursor = end;
  }
  out.insert(out.end(), old.begin() + static_cast<std::ptrdiff_t>(cursor), old.end());
  return out;
}

MetaEditScript make_meta(const EditScript& source_edits, const EditScript& target_edits) {
  return {diff(serialize_tokens(source_edits), serialize_tokens(target_edits)), target_edits};
}

}  // namespace coedit
