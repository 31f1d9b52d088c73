#include <array>
#include <algorithm>

#include "coedit/edit_script.hpp"
#include "coedit/error.hpp"

namespace coedit {

namespace {

constexpr std::string_view kInsert = "Insert";
constexpr std::string_view kInsertEnd = "InsertEnd";
constexpr std::string_view kDelete = "Delete";
constexpr std::string_view kDeleteEnd = "DeleteEnd";
constexpr std::string_view kReplaceOld = "ReplaceOld";
constexpr std::string_view kReplaceNew = "ReplaceNew";
constexpr std::string_view kReplaceEnd = "ReplaceEnd";
constexpr std::string_view kOldKeepBefore = "ReplaceOldKeepBefore";
constexpr std::string_view kNewKeepBefore = "ReplaceNewKeepBefore";
constexpr std::string_view kOldKeepAfter = "ReplaceOldKeepAfter";
constexpr std::string_view kNewKeepAfter = "ReplaceNewKeepAfter";
constexpr std::string_view kSep = "SEP";

constexpr std::array<std::string_view, 12> kMarkerNames = {
    kInsert,      kInsertEnd,    kDelete,        kDeleteEnd,     kReplaceOld,    kReplaceNew,
    kReplaceEnd,  kOldKeepBefore, kNewKeepBefore, kOldKeepAfter, kNewKeepAfter, kSep};

std::string marker(std::string_view name) { return "<" + std::string(name) + ">"; }

// Name of a marker-shaped token after stripping all leading '<', or empty.
std::string_view marker_name(std::string_view token) {
  const auto first = token.find_first_not_of('<');
  if (first == 0 || first == std::string_view::npos || token.back() != '>') return {};
  const auto name = token.substr(first, token.size() - first - 1);
  for (const auto m : kMarkerNames) {
    if (m == name) return m;
  }
  return {};
}

bool is_space(char c) { return static_cast<unsigned char>(c) <= ' '; }

void append_span(Tokens& out, const Tokens& span) {
  for (const auto& t : span) out.push_back(escape_token(t));
}

}  // namespace

bool is_marker(std::string_view token) noexcept {
  return token.size() > 2 && token[1] != '<' && !marker_name(token).empty();
}

std::string escape_token(std::string_view token) {
  if (marker_name(token).empty()) return std::string(token);
  return "<" + std::string(token);
}

std::string unescape_token(std::string_view token) {
  if (token.size() > 1 && token[1] == '<' && !marker_name(token).empty()) {
    return std::string(token.substr(1));
  }
  return std::string(token);
}

Tokens serialize_tokens(const EditScript& script) {
  Tokens out;
  for (const auto& e : script.edits) {
    switch (e.op) {
      case EditOp::Insert:
        out.push_back(marker(kInsert));
        append_span(out, e.new_span);
        out.push_back(marker(kInsertEnd));
        break;
      case EditOp::Delete:
        out.push_back(marker(kDelete));
        append_span(out, e.old_span);
        out.push_back(marker(kDeleteEnd));
        break;
      case EditOp::Replace:
      case EditOp::ReplaceKeepBefore:
      case EditOp::ReplaceKeepAfter: {
        const bool before = e.op == EditOp::ReplaceKeepBefore;
        const bool after = e.op == EditOp::ReplaceKeepAfter;
        out.push_back(marker(before ? kOldKeepBefore : after ? kOldKeepAfter : kReplaceOld));
        append_span(out, e.old_span);
        out.push_back(marker(before ? kNewKeepBefore : after ? kNewKeepAfter : kReplaceNew));
        append_span(out, e.new_span);
        out.push_back(marker(kReplaceEnd));
        break;
      }
    }
  }
  return out;
}

std::string serialize(const EditScript& script) { return detokenize(serialize_tokens(script)); }

std::vector<ScriptToken> split_script_text(std::string_view text) {
  std::vector<ScriptToken> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (is_space(text[i])) {
      ++i;
      continue;
    }
    std::size_t end = i;
    // A literal may hold spaces; keep it whole if it closes right before a
    // space (or the end of the text).
    for (const Lang lang : {Lang::Java, Lang::CSharp}) {
      try {
        const auto lit = literal_extent(text, i, lang);
        if (lit && *lit > i && (*lit == text.size() || is_space(text[*lit]))) {
          end = *lit;
          break;
        }
      } catch (const Error&) {
        // unterminated: fall through to the plain split
      }
    }
    if (end == i) {
      while (end < text.size() && !is_space(text[end])) ++end;
    }
    out.push_back({std::string(text.substr(i, end - i)), i});
    i = end;
  }
  return out;
}

EditScript parse_script_tokens(const std::vector<ScriptToken>& stream, ScriptForm form) {
  EditScript script{form, {}};
  const bool concise = form == ScriptForm::Concise;
  std::size_t i = 0;

  const auto fail = [&](const std::string& what, std::size_t at) -> Error {
    const std::size_t offset = at < stream.size() ? stream[at].offset
                               : stream.empty()   ? 0
                                                  : stream.back().offset + stream.back().text.size();
    return Error(ErrorCode::MalformedScript, what, offset);
  };
  // Reads code tokens up to the next marker, which must be `closer`.
  const auto read_span = [&](std::string_view closer) {
    Tokens span;
    while (i < stream.size() && !is_marker(stream[i].text)) {
      span.push_back(unescape_token(stream[i].text));
      ++i;
    }
    if (i >= stream.size()) throw fail("missing " + marker(closer), i);
    if (stream[i].text != marker(closer)) {
      throw fail("expected " + marker(closer) + ", got " + stream[i].text, i);
    }
    ++i;
    return span;
  };

  while (i < stream.size()) {
    const std::string& tok = stream[i].text;
    const std::size_t start = i;
    if (!is_marker(tok)) throw fail("code token outside an edit: " + tok, i);
    const auto name = marker_name(tok);
    ++i;
    Edit e;
    if (name == kInsert && concise) {
      e.op = EditOp::Insert;
      e.new_span = read_span(kInsertEnd);
      if (e.new_span.empty()) throw fail("empty insertion", start);
    } else if (name == kDelete) {
      e.op = EditOp::Delete;
      e.old_span = read_span(kDeleteEnd);
      if (e.old_span.empty()) throw fail("empty deletion", start);
    } else if (name == kReplaceOld || (!concise && (name == kOldKeepBefore || name == kOldKeepAfter))) {
      e.op = name == kReplaceOld       ? EditOp::Replace
             : name == kOldKeepBefore ? EditOp::ReplaceKeepBefore
                                      : EditOp::ReplaceKeepAfter;
      const auto mid = name == kReplaceOld ? kReplaceNew : name == kOldKeepBefore ? kNewKeepBefore : kNewKeepAfter;
      e.old_span = read_span(mid);
      e.new_span = read_span(kReplaceEnd);
      if (e.old_span.empty() || e.new_span.empty()) throw fail("empty replacement span", start);
    } else {
      throw fail("unexpected " + tok + " in a " + std::string(to_string(form)) + " script", start);
    }
    script.edits.push_back(std::move(e));
  }
  return script;
}

EditScript parse_script(std::string_view text, ScriptForm form) {
  return parse_script_tokens(split_script_text(text), form);
}

std::string serialize(const MetaEditScript& meta) {
  std::string out = serialize(meta.plan);
  if (!out.empty()) out += ' ';
  out += kSepToken;
  const std::string target = serialize(meta.target);
  if (!target.empty()) out += " " + target;
  return out;
}

MetaEditScript parse_meta(std::string_view text) {
  const auto stream = split_script_text(text);
  const auto sep = std::find_if(stream.begin(), stream.end(),
                                [](const ScriptToken& t) { return t.text == kSepToken; });
  if (sep == stream.end()) {
    throw Error(ErrorCode::MalformedScript, "missing <SEP>", text.size());
  }
  MetaEditScript meta;
  meta.plan = parse_script_tokens({stream.begin(), sep}, ScriptForm::Concise);
  meta.target = parse_script_tokens({sep + 1, stream.end()}, ScriptForm::Unambiguous);
  return meta;
}

}  // namespace coedit
