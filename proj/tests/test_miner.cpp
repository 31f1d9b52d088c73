#include <doctest.h>

#include <filesystem>
#include <set>

#include "coedit/error.hpp"
#include "coedit/miner.hpp"
#include "coedit/sequence_matcher.hpp"
#include "support/twin_repos.hpp"
#include "test_support.hpp"

using namespace coedit;

namespace {

std::vector<std::string> signatures(const std::string& src, Lang lang) {
  std::vector<std::string> out;
  for (const auto& m : scan_methods(lex(src, lang), "F")) out.push_back(m.identity.class_name + "::" + m.identity.signature);
  return out;
}

MethodChange change(const std::string& old_src, const std::string& new_src, Lang lang, std::int64_t t,
                    const std::string& name = "m()", const std::string& commit = "c") {
  return {{"File", "K", name}, lex(old_src, lang), lex(new_src, lang), commit, t};
}

AlignedChangePair pair_at(const std::string& project, std::int64_t tgt_time, int k) {
  AlignedChangePair p;
  p.project = project;
  p.source = change("a ;", "a ; b" + std::to_string(k) + " ;", Lang::Java, tgt_time - 10);
  p.target = change("a ;", "a ; b" + std::to_string(k) + " ;", Lang::CSharp, tgt_time);
  p.source.commit_id = "s" + std::to_string(k);
  p.target.commit_id = "t" + std::to_string(k);
  p.similarity = 1;
  return p;
}

}  // namespace

TEST_CASE("java method scanner") {
  const std::string src = R"(
package p;
import java.util.List;
@Deprecated
public class Outer<T> extends Base implements Runnable {
  private int field = compute(1, 2);
  private final Runnable r = new Runnable() { public void run() { } };
  public Outer(int a) { super(a); }
  @Override public void run() { if (x) { y(); } }
  protected <R> List<R> map(final java.util.function.Function<? super T, R> f, int... rest) throws Exception { return null; }
  abstract void noBody(String s);
  static class Inner { int get(int[] xs, @Ann("v") String s) { return xs[0]; } }
  enum Color { RED, GREEN; String label() { return name(); } }
  interface Shape { default double area() { return 0; } }
}
class Second { void other() { new Thread() { public void run() {} }.start(); } }
)";
  const auto sigs = signatures(src, Lang::Java);
  const std::set<std::string> got(sigs.begin(), sigs.end());
  std::string all;
  for (const auto& s : sigs) all += s + "\n";
  INFO(all);
  const std::set<std::string> expected = {
      "Outer::Outer(int)",
      "Outer::run()",
      "Outer::map(Function<? super T,R>,int...)",
      "Outer.Inner::get(int[],String)",
      "Outer.Color::label()",
      "Outer.Shape::area()",
      "Second::other()",
  };
  CHECK(got == expected);
  CHECK(sigs.size() == expected.size());
}

TEST_CASE("c# method scanner") {
  const std::string src = R"(
using System;
namespace A.B {
  [Serializable]
  public sealed class Thing : IDisposable {
    private int count = Compute(1);
    public Thing(int n) : base(n) { count = n; }
    public int Count { get { return count; } set { count = value; } }
    public void Dispose() { }
    public static Thing operator +(Thing a, Thing b) { return a; }
    public T Pick<T>(List<T> xs, ref int i, out string s, params object[] rest) where T : class { s = ""; return xs[i]; }
    public int Twice(int x) => x * 2;
    ~Thing() { }
    public event EventHandler Changed;
    private struct Cell { public bool Empty() { return true; } }
    public enum Kind { One, Two }
  }
}
)";
  const auto sigs = signatures(src, Lang::CSharp);
  const std::set<std::string> got(sigs.begin(), sigs.end());
  const std::set<std::string> expected = {
      "Thing::Thing(int)",
      "Thing::Dispose()",
      "Thing::operator+(Thing,Thing)",
      "Thing::Pick(List<T>,int,string,object[])",
      "Thing::Twice(int)",
      "Thing::~Thing()",
      "Thing.Cell::Empty()",
  };
  CHECK(got == expected);
}

TEST_CASE("method tokens run from annotations to the closing brace") {
  const auto methods = scan_methods(lex("class A { @Test void t() { x(); } int y; }", Lang::Java), "A.java");
  REQUIRE(methods.size() == 1);
  CHECK(detokenize(methods[0].tokens) == "@ Test void t ( ) { x ( ) ; }");
  CHECK(methods[0].identity.canonical() == "A.java#A#t()");
}

TEST_CASE("identifier matching") {
  CHECK(levenshtein_ratio("", "") == 1.0);
  CHECK(levenshtein_ratio("kitten", "sitting") == doctest::Approx(1 - 3.0 / 7));
  const MethodIdentity j{"src/a/LedgerWorker.java", "LedgerWorker", "computeTotal(int,int)"};
  const MethodIdentity c{"src/A/LedgerWorker.cs", "LedgerWorker", "ComputeTotal(int,int)"};
  CHECK(normalized_identifier(j) == normalized_identifier(c));
  const MethodIdentity other{"src/A/LedgerWorker.cs", "LedgerWorker", "FlushCache(int,int)"};
  const auto pairs = pair_methods({j}, {other, c});
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].second == c);
}

TEST_CASE("change similarity") {
  const auto s = change("int v = a ;\nreturn v ;", "int v = a ;\nv = v + 1 ;\nreturn v ;", Lang::Java, 0);
  const auto t = change("var v = a ;\nreturn v ;", "var v = a ;\nv = v + 1 ;\nreturn v ;", Lang::CSharp, 0);
  const auto comp = change_similarity(s, t);
  CHECK(comp.active[0]);
  CHECK_FALSE(comp.active[1]);
  CHECK(comp.active[2]);
  CHECK_FALSE(comp.active[3]);
  CHECK(comp.added_subtokens == 1.0);
  CHECK(comp.added_lines == 1.0);
  CHECK(comp.mean() == 1.0);

  const auto u = change("var v = a ;\nreturn v ;", "var v = a ;\nLog ( ) ;\nreturn v ;", Lang::CSharp, 0);
  CHECK(change_similarity(s, u).mean() < 0.5);
  CHECK(jaccard({"a", "b"}, {"b", "c"}) == doctest::Approx(1.0 / 3));
}

TEST_CASE("alignment window and threshold") {
  const std::int64_t day = kSecondsPerDay;
  const auto s = change("a ;", "a ; b ;", Lang::Java, 1000, "m()", "s1");
  for (const auto& [gap, expected] : {std::pair{0 * day, 1u}, std::pair{90 * day, 1u}, std::pair{90 * day + 1, 0u},
                                      std::pair{-1 * day, 0u}}) {
    INFO("gap " << gap);
    const auto t = change("a ;", "a ; b ;", Lang::CSharp, 1000 + gap, "m()", "t1");
    CHECK(align_changes({s}, {t}, {}, "p").size() == expected);
  }
  // each side used once; the closer target wins among equals
  const auto t1 = change("a ;", "a ; b ;", Lang::CSharp, 1000 + 5 * day, "m()", "t1");
  const auto t2 = change("a ;", "a ; b ;", Lang::CSharp, 1000 + 2 * day, "m()", "t2");
  const auto out = align_changes({s}, {t1, t2}, {}, "p");
  REQUIRE(out.size() == 1);
  CHECK(out[0].target.commit_id == "t2");
}

TEST_CASE("time-segmented split") {
  std::vector<AlignedChangePair> pairs;
  for (int k = 0; k < 10; ++k) pairs.push_back(pair_at("p", 1000 + (9 - k) * 100, k));
  for (int k = 0; k < 3; ++k) pairs.push_back(pair_at("q", 5000 + k, 20 + k));
  const auto split = split_time_segmented(pairs, 0.7, 0.1);
  std::map<std::string, std::array<int, 3>> counts;
  for (const auto& p : split.train) counts[p.project][0]++;
  for (const auto& p : split.valid) counts[p.project][1]++;
  for (const auto& p : split.test) counts[p.project][2]++;
  CHECK(counts["p"] == std::array<int, 3>{7, 1, 2});
  CHECK(counts["q"] == std::array<int, 3>{2, 0, 1});
  // every train pair of a project precedes its valid and test pairs
  for (const auto& tr : split.train) {
    for (const auto* later : {&split.valid, &split.test}) {
      for (const auto& x : *later) {
        if (x.project == tr.project) CHECK(tr.target.commit_time <= x.target.commit_time);
      }
    }
  }
  CHECK_THROWS_AS(split_time_segmented({}, 0.7, 0.1), Error);
  CHECK_THROWS_AS(split_time_segmented(pairs, 0.8, 0.3), Error);
}

TEST_CASE("side stats") {
  const auto st = side_stats({{toks("a b c"), toks("a x c d")}, {toks("p"), toks("p")}});
  CHECK(st.count == 2);
  CHECK(st.avg_old_len == 2.0);
  CHECK(st.avg_new_len == 2.5);
  CHECK(st.avg_edits == 1.0);  // replace b->x, insert d: 2 edits over 2 examples
  CHECK(st.avg_added == 1.0);
  CHECK(st.avg_deleted == 0.5);
}

TEST_CASE("mining the twin repositories") {
  const auto root = fixture::temp_dir("miner");
  const auto repos = fixture::make_twin_repos(root);
  const auto result = mine(repos.java_repo, Lang::Java, repos.cs_repo, Lang::CSharp, {}, "twin");
  CHECK(result.src_changes == 10);
  CHECK(result.tgt_changes == 10);
  REQUIRE(result.pairs.size() == 5);
  std::set<std::string> got;
  for (const auto& p : result.pairs) {
    got.insert(p.source.identity.signature);
    CHECK(p.project == "twin");
    CHECK(p.similarity >= 0.5);
    CHECK(p.target.identity.signature.substr(1) == p.source.identity.signature.substr(1));
  }
  std::set<std::string> planted;
  for (const auto& p : repos.planted) planted.insert(p.java_method + "(int,int)");
  CHECK(got == planted);

  try {
    extract_changes(root + "/missing", Lang::Java);
    FAIL("expected");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RepoUnreadable);
  }
  std::filesystem::remove_all(root);
}
