#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coedit/token_model.hpp"

namespace coedit {

// Insert/Delete/Replace form the concise vocabulary. The unambiguous
// vocabulary is Replace, Delete, ReplaceKeepBefore and ReplaceKeepAfter.
enum class EditOp { Insert, Delete, Replace, ReplaceKeepBefore, ReplaceKeepAfter };
enum class ScriptForm { Concise, Unambiguous };

std::string_view to_string(EditOp op) noexcept;
std::string_view to_string(ScriptForm form) noexcept;

struct Edit {
  EditOp op = EditOp::Replace;
  Tokens old_span;  // empty for Insert
  Tokens new_span;  // empty for Delete

  // Where old_span starts in the sequence the edit was computed against.
  // Set by diff() and disambiguate(); never serialized and ignored by ==.
  std::optional<std::size_t> old_begin;

  friend bool operator==(const Edit& a, const Edit& b) {
    return a.op == b.op && a.old_span == b.old_span && a.new_span == b.new_span;
  }
};

struct EditScript {
  ScriptForm form = ScriptForm::Concise;
  // Ordered by position in the old sequence; non-overlapping.
  std::vector<Edit> edits;

  bool empty() const noexcept { return edits.empty(); }
  friend bool operator==(const EditScript&, const EditScript&) = default;
};

// "[Edit Plan] <SEP> [Target Sequence]": a concise script over the serialized
// source edit stream that rewrites it into the target edit script.
struct MetaEditScript {
  EditScript plan;
  EditScript target;

  friend bool operator==(const MetaEditScript&, const MetaEditScript&) = default;
};

inline constexpr std::string_view kSepToken = "<SEP>";

// --- computing and applying -----------------------------------------------

// Concise script from the opcode alignment; positions are recorded.
EditScript diff(const Tokens& old_tokens, const Tokens& new_tokens);
// Throws Error(InvalidArgument) if the languages differ.
EditScript diff(const TokenSequence& old_seq, const TokenSequence& new_seq);

// Rewrites a concise script (as produced by diff against `old_tokens`) into
// the unambiguous form. Replace and Delete spans that already occur once are
// kept. Otherwise the shortest unique anchor is searched on the before side,
// then on the after side, never reaching into a neighbouring edit. When
// neither side works, a two-sided context is used and the edit becomes a
// plain Replace; edits whose contexts collide are merged. Throws
// Error(NoUniqueAnchor) only when nothing can be anchored at all (an insert
// into an empty sequence).
EditScript disambiguate(const EditScript& concise, const Tokens& old_tokens);

// Locates every old_span against the original sequence and splices the new
// spans in. All-or-nothing: throws Error(AnchorNotFound), Error(AmbiguousAnchor)
// or Error(OverlappingEdits) without producing a partial result.
Tokens apply(const EditScript& script, const Tokens& old_tokens);
TokenSequence apply(const EditScript& script, const TokenSequence& old_seq);

// Replays a script whose edits carry positions (old_begin), e.g. a concise
// diff. Throws Error(InvalidArgument) when a position is missing or stale.
Tokens replay(const EditScript& script, const Tokens& old_tokens);

// Number of (possibly overlapping) occurrences of `needle` in `haystack`,
// counting stops at `limit`. An empty needle occurs haystack.size() + 1 times.
std::size_t count_occurrences(const Tokens& haystack, const Tokens& needle,
                              std::size_t limit = 2);

// --- text format ------------------------------------------------------------

// Reserved marker tokens, e.g. "<ReplaceOld>" and "<SEP>".
bool is_marker(std::string_view token) noexcept;
// A code token that looks like a marker ("<Insert>", "<<Insert>", ...) gets
// one more leading '<'; unescape_token reverses it. Other tokens pass through.
std::string escape_token(std::string_view token);
std::string unescape_token(std::string_view token);

// Marker-aware token stream, e.g. {"<ReplaceOld>", "a", "<ReplaceNew>", "b",
// "<ReplaceEnd>"}. Code tokens are escaped.
Tokens serialize_tokens(const EditScript& script);
std::string serialize(const EditScript& script);

struct ScriptToken {
  std::string text;
  std::size_t offset;
};

// Whitespace split that keeps string and char literals (which may contain
// spaces) whole.
std::vector<ScriptToken> split_script_text(std::string_view text);

// Throws Error(MalformedScript) carrying the byte offset of the problem.
EditScript parse_script(std::string_view text, ScriptForm form);
EditScript parse_script_tokens(const std::vector<ScriptToken>& stream, ScriptForm form);

MetaEditScript make_meta(const EditScript& source_edits, const EditScript& target_edits);
std::string serialize(const MetaEditScript& meta);
// Splits at the first unescaped <SEP>. Throws Error(MalformedScript).
MetaEditScript parse_meta(std::string_view text);

}  // namespace coedit
