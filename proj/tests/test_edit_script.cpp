#include <doctest.h>

#include <json.hpp>

#include "coedit/edit_script.hpp"
#include "coedit/error.hpp"
#include "coedit/sequence_matcher.hpp"
#include "support/edit_fuzz.hpp"
#include "test_support.hpp"

using namespace coedit;

namespace {

OpTag tag_of(const std::string& s) {
  if (s == "equal") return OpTag::Equal;
  if (s == "replace") return OpTag::Replace;
  if (s == "delete") return OpTag::Delete;
  return OpTag::Insert;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no exception");
  return ErrorCode::InvalidArgument;
}

Tokens role_check() { return lex(slurp(data_path("role_check_old.java")), Lang::Java).texts(); }

// Index of the n-th occurrence (0-based) of `t` at or after `from`.
std::size_t find_tok(const Tokens& s, const std::string& t, std::size_t from = 0) {
  return static_cast<std::size_t>(std::find(s.begin() + static_cast<long>(from), s.end(), t) - s.begin());
}

}  // namespace

TEST_CASE("opcodes match difflib on the frozen fixture") {
  const auto cases = nlohmann::json::parse(slurp(data_path("difflib_opcodes.json")));
  REQUIRE(cases.size() >= 100);
  std::size_t i = 0;
  for (const auto& c : cases) {
    const auto a = c["a"].get<Tokens>();
    const auto b = c["b"].get<Tokens>();
    std::vector<Opcode> expected;
    for (const auto& op : c["opcodes"]) {
      expected.push_back({tag_of(op[0].get<std::string>()), op[1].get<std::size_t>(), op[2].get<std::size_t>(),
                          op[3].get<std::size_t>(), op[4].get<std::size_t>()});
    }
    INFO("case " << i++);
    CHECK(opcodes(a, b) == expected);
  }
}

TEST_CASE("diff produces concise edits with positions") {
  const auto old_t = toks("a b c d e");
  const auto new_t = toks("a X c d e f");
  const auto s = diff(old_t, new_t);
  CHECK(s.form == ScriptForm::Concise);
  REQUIRE(s.edits.size() == 2);
  CHECK(s.edits[0].op == EditOp::Replace);
  CHECK(s.edits[0].old_span == toks("b"));
  CHECK(s.edits[0].new_span == toks("X"));
  CHECK(s.edits[0].old_begin == 1u);
  CHECK(s.edits[1].op == EditOp::Insert);
  CHECK(s.edits[1].old_begin == 5u);
  CHECK(serialize(s) == "<ReplaceOld> b <ReplaceNew> X <ReplaceEnd> <Insert> f <InsertEnd>");
  CHECK(replay(s, old_t) == new_t);
  CHECK(diff(old_t, old_t).empty());
}

TEST_CASE("worked examples on the role-check test method") {
  const Tokens old_t = role_check();

  SUBCASE("insertion after the assertEquals statement") {
    Tokens new_t = old_t;
    new_t.insert(new_t.end() - 1, {"return", ";"});
    const auto concise = diff(old_t, new_t);
    CHECK(serialize(concise) == "<Insert> return ; <InsertEnd>");
    const auto una = disambiguate(concise, old_t);
    CHECK(serialize(una) ==
          "<ReplaceOldKeepBefore> getMessage ( ) ) ; <ReplaceNewKeepBefore> getMessage ( ) ) ; return ; <ReplaceEnd>");
    CHECK(coedit::apply(una, old_t) == new_t);
  }
  SUBCASE("replacement of the second PdfException") {
    Tokens new_t = old_t;
    const auto at = find_tok(new_t, "PdfException", find_tok(new_t, "format"));
    new_t[at] = "LayoutExceptionMessageConstant";
    const auto una = disambiguate(diff(old_t, new_t), old_t);
    CHECK(serialize(una) ==
          "<ReplaceOldKeepBefore> format ( PdfException <ReplaceNewKeepBefore> format ( LayoutExceptionMessageConstant "
          "<ReplaceEnd>");
    CHECK(coedit::apply(una, old_t) == new_t);
  }
  SUBCASE("deletion of PdfException .") {
    Tokens new_t = old_t;
    const auto at = find_tok(new_t, "PdfException", find_tok(new_t, "format"));
    new_t.erase(new_t.begin() + static_cast<long>(at), new_t.begin() + static_cast<long>(at + 2));
    const auto una = disambiguate(diff(old_t, new_t), old_t);
    CHECK(serialize(una) == "<ReplaceOldKeepBefore> format ( PdfException . <ReplaceNewKeepBefore> format ( <ReplaceEnd>");
    CHECK(coedit::apply(una, old_t) == new_t);
  }
}

TEST_CASE("unique spans keep their plain form") {
  const auto old_t = toks("a b c a b");
  const auto una = disambiguate(diff(old_t, toks("a b a b")), old_t);
  CHECK(serialize(una) == "<Delete> c <DeleteEnd>");
  const auto una2 = disambiguate(diff(old_t, toks("a b Z a b")), old_t);
  CHECK(serialize(una2) == "<ReplaceOld> c <ReplaceNew> Z <ReplaceEnd>");
}

TEST_CASE("after anchor when nothing precedes the edit") {
  const auto old_t = toks("x y x");
  const auto una = disambiguate(diff(old_t, toks("N x y x")), old_t);
  CHECK(serialize(una) == "<ReplaceOldKeepAfter> x y <ReplaceNewKeepAfter> N x y <ReplaceEnd>");
  CHECK(coedit::apply(una, old_t) == toks("N x y x"));
}

TEST_CASE("two-sided context when neither side alone is unique") {
  const auto old_t = toks("a a");
  const auto new_t = toks("a X a");
  const auto una = disambiguate(diff(old_t, new_t), old_t);
  REQUIRE(una.edits.size() == 1);
  CHECK(una.edits[0].op == EditOp::Replace);
  CHECK(una.edits[0].old_span == old_t);
  CHECK(coedit::apply(una, old_t) == new_t);
}

TEST_CASE("insert into an empty sequence has no anchor") {
  CHECK(code_of([] { disambiguate(diff(Tokens{}, toks("a")), Tokens{}); }) == ErrorCode::NoUniqueAnchor);
}

TEST_CASE("apply error modes") {
  const auto old_t = toks("a b a c");
  EditScript s{ScriptForm::Unambiguous, {{EditOp::Replace, toks("z"), toks("y"), {}}}};
  CHECK(code_of([&] { coedit::apply(s, old_t); }) == ErrorCode::AnchorNotFound);
  s.edits[0].old_span = toks("a");
  CHECK(code_of([&] { coedit::apply(s, old_t); }) == ErrorCode::AmbiguousAnchor);
  s.edits = {{EditOp::Replace, toks("a b"), toks("q"), {}}, {EditOp::Delete, toks("b a"), {}, {}}};
  CHECK(code_of([&] { coedit::apply(s, old_t); }) == ErrorCode::OverlappingEdits);
  s.edits = {{EditOp::Insert, {}, toks("q"), {}}};
  CHECK(code_of([&] { coedit::apply(s, old_t); }) == ErrorCode::InvalidArgument);
  // all-or-nothing: a good edit followed by a bad one changes nothing
  s.edits = {{EditOp::Replace, toks("c"), toks("C"), {}}, {EditOp::Delete, toks("zz"), {}, {}}};
  CHECK(code_of([&] { coedit::apply(s, old_t); }) == ErrorCode::AnchorNotFound);
}

TEST_CASE("apply is order independent for located edits") {
  const auto old_t = toks("p q r s t");
  EditScript s{ScriptForm::Unambiguous,
               {{EditOp::Replace, toks("t"), toks("T"), {}}, {EditOp::ReplaceKeepBefore, toks("p"), toks("p P"), {}}}};
  CHECK(coedit::apply(s, old_t) == toks("p P q r s T"));
}

TEST_CASE("count_occurrences") {
  const auto h = toks("a a a b");
  CHECK(count_occurrences(h, toks("a a"), 10) == 2);
  CHECK(count_occurrences(h, toks("a a"), 1) == 1);
  CHECK(count_occurrences(h, toks("b"), 10) == 1);
  CHECK(count_occurrences(h, toks("c"), 10) == 0);
  CHECK(count_occurrences(h, {}, 10) == 5);
}

TEST_CASE("round trip and anchor properties on a fuzz sample") {
  for (auto lang : {Lang::Java, Lang::CSharp}) {
    std::size_t i = 0;
    for (const auto& c : fuzz::corpus(lang, 300, 7 + static_cast<int>(lang), 120)) {
      INFO("case " << i++);
      const auto concise = diff(c.old_tokens, c.new_tokens);
      CHECK(replay(concise, c.old_tokens) == c.new_tokens);
      const auto una = disambiguate(concise, c.old_tokens);
      CHECK(una.form == ScriptForm::Unambiguous);
      REQUIRE(coedit::apply(una, c.old_tokens) == c.new_tokens);
      const auto report = fuzz::check_anchors(una, concise, c.old_tokens, true);
      CHECK(report.not_unique == 0);
      CHECK(report.not_minimal == 0);
      CHECK(report.unlocatable == 0);
      // text form survives a round trip
      CHECK(parse_script(serialize(una), ScriptForm::Unambiguous) == una);
    }
  }
}
