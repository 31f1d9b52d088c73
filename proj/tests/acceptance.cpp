// Acceptance suite: prints one [PASS]/[FAIL] line per criterion.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "coedit/edit_script.hpp"
#include "coedit/error.hpp"
#include "coedit/metrics.hpp"
#include "coedit/miner.hpp"
#include "coedit/sequence_matcher.hpp"
#include "coedit/translate.hpp"
#include "support/edit_fuzz.hpp"
#include "support/metric_cases.hpp"
#include "support/metric_oracle.hpp"
#include "support/twin_repos.hpp"

using namespace coedit;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

// ---------------------------------------------------------------------------

std::vector<fuzz::Case> corpus_for(Lang lang) { return fuzz::corpus(lang, 1000, lang == Lang::Java ? 101 : 202, 300); }

Outcome ac1() {
  Outcome o;
  const auto start = Clock::now();
  std::size_t total = 0, ok = 0;
  for (auto lang : {Lang::Java, Lang::CSharp}) {
    for (const auto& c : corpus_for(lang)) {
      ++total;
      try {
        const auto una = disambiguate(diff(c.old_tokens, c.new_tokens), c.old_tokens);
        if (coedit::apply(una, c.old_tokens) == c.new_tokens) ++ok;
      } catch (const Error& e) {
        (void)e;
      }
    }
  }
  const double secs = seconds_since(start);
  o.detail = std::to_string(ok) + "/" + std::to_string(total) + " round trips, " + std::to_string(secs) + " s";
  if (ok != total) o.fail(o.detail);
  if (secs >= 30) o.fail("too slow: " + o.detail);
  return o;
}

Outcome ac2() {
  Outcome o;
  std::size_t spans = 0, checked = 0;
  fuzz::AnchorReport sum;
  for (auto lang : {Lang::Java, Lang::CSharp}) {
    for (const auto& c : corpus_for(lang)) {
      const auto concise = diff(c.old_tokens, c.new_tokens);
      EditScript una;
      try {
        una = disambiguate(concise, c.old_tokens);
      } catch (const Error& e) {
        o.fail(std::string("disambiguate threw: ") + e.what());
        continue;
      }
      const bool small = c.old_tokens.size() <= 200;
      const auto r = fuzz::check_anchors(una, concise, c.old_tokens, small);
      spans += una.edits.size();
      checked += small ? una.edits.size() : 0;
      sum.not_unique += r.not_unique;
      sum.not_minimal += r.not_minimal;
      sum.unlocatable += r.unlocatable;
    }
  }
  o.detail = std::to_string(spans) + " spans unique-checked, " + std::to_string(checked) + " minimality-checked; " +
             std::to_string(sum.not_unique) + " non-unique, " + std::to_string(sum.not_minimal) + " non-minimal, " +
             std::to_string(sum.unlocatable) + " unlocatable";
  if (sum.not_unique || sum.not_minimal || sum.unlocatable) o.fail(o.detail);
  return o;
}

Outcome ac3() {
  Outcome o;
  const Tokens old_t = lex(slurp(fs::path(COEDIT_TEST_DATA) / "role_check_old.java"), Lang::Java).texts();
  const auto second = [&](const Tokens& t) {
    const auto f = std::find(t.begin(), t.end(), "format");
    return static_cast<std::size_t>(std::find(f, t.end(), "PdfException") - t.begin());
  };
  Tokens ins = old_t;
  ins.insert(ins.end() - 1, {"return", ";"});
  Tokens rep = old_t;
  rep[second(rep)] = "LayoutExceptionMessageConstant";
  Tokens del = old_t;
  del.erase(del.begin() + static_cast<long>(second(del)), del.begin() + static_cast<long>(second(del) + 2));
  const std::pair<Tokens, std::string> cases[] = {
      {ins, "<ReplaceOldKeepBefore> getMessage ( ) ) ; <ReplaceNewKeepBefore> getMessage ( ) ) ; return ; <ReplaceEnd>"},
      {rep, "<ReplaceOldKeepBefore> format ( PdfException <ReplaceNewKeepBefore> format ( LayoutExceptionMessageConstant "
            "<ReplaceEnd>"},
      {del, "<ReplaceOldKeepBefore> format ( PdfException . <ReplaceNewKeepBefore> format ( <ReplaceEnd>"},
  };
  int good = 0;
  for (const auto& [new_t, expected] : cases) {
    const auto una = disambiguate(diff(old_t, new_t), old_t);
    const auto got = serialize(una);
    if (got != expected) o.fail("got: " + got);
    else if (coedit::apply(una, old_t) != new_t) o.fail("script does not reproduce the edit");
    else ++good;
  }
  if (o.pass) o.detail = std::to_string(good) + "/3 transformations byte-exact";
  return o;
}

Outcome ac4() {
  Outcome o;
  const auto& kw = keywords(Lang::Java);
  double worst = 0;
  std::size_t identity = 0;
  for (const auto& c : metric_cases::all()) {
    const double diffs[] = {
        std::abs(bleu(c.ref, c.hyp) - oracle::bleu(c.ref, c.hyp)),
        std::abs(sari(c.src, c.ref, c.hyp) - oracle::sari(c.src, c.ref, c.hyp)),
        std::abs(gleu(c.src, c.ref, c.hyp) - oracle::gleu(c.src, c.ref, c.hyp)),
        std::abs(codebleu_reduced(c.ref, c.hyp, kw) - oracle::codebleu_reduced(c.ref, c.hyp, kw)),
    };
    for (double d : diffs) worst = std::max(worst, d);
    const double x = xmatch(c.ref, c.hyp);
    if (x != 0.0 && x != 100.0) o.fail("xmatch not in {0,100}");
    if (!c.ref.empty()) {
      ++identity;
      if (bleu(c.ref, c.ref) != 100.0 || sari(c.src, c.ref, c.ref) != 100.0 || gleu(c.src, c.ref, c.ref) != 100.0 ||
          codebleu_reduced(c.ref, c.ref, kw) != 100.0 || xmatch(c.ref, c.ref) != 100.0) {
        o.fail("identity case below 100");
      }
    }
  }
  if (worst > 1e-9) o.fail("max oracle difference " + std::to_string(worst));
  if (o.pass) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "20 cases, max |lib - oracle| = %.3g, %zu identity cases at 100", worst, identity);
    o.detail = buf;
  }
  return o;
}

// Recount of split statistics straight from opcodes.
SideStats recount(const std::vector<AlignedChangePair>& items, bool source_side) {
  SideStats s;
  s.count = items.size();
  if (items.empty()) return s;
  for (const auto& p : items) {
    const auto& ch = source_side ? p.source : p.target;
    const Tokens o = ch.old_body.texts(), n = ch.new_body.texts();
    s.avg_old_len += static_cast<double>(o.size());
    s.avg_new_len += static_cast<double>(n.size());
    for (const auto& op : opcodes(o, n)) {
      if (op.tag == OpTag::Equal) continue;
      s.avg_edits += 1;
      s.avg_added += static_cast<double>(op.j2 - op.j1);
      s.avg_deleted += static_cast<double>(op.i2 - op.i1);
    }
  }
  const double c = static_cast<double>(s.count);
  for (double* v : {&s.avg_old_len, &s.avg_new_len, &s.avg_edits, &s.avg_added, &s.avg_deleted}) *v /= c;
  return s;
}

bool same(const SideStats& a, const SideStats& b) {
  const auto eq = [](double x, double y) { return std::abs(x - y) < 1e-12; };
  return a.count == b.count && eq(a.avg_old_len, b.avg_old_len) && eq(a.avg_new_len, b.avg_new_len) &&
         eq(a.avg_edits, b.avg_edits) && eq(a.avg_added, b.avg_added) && eq(a.avg_deleted, b.avg_deleted);
}

Outcome ac5() {
  Outcome o;
  const auto root = fixture::temp_dir("ac5");
  try {
    const auto five = fixture::make_twin_repos(root + "/five");
    const auto mined = mine(five.java_repo, Lang::Java, five.cs_repo, Lang::CSharp, {}, "twin");
    std::set<std::string> got, planted;
    for (const auto& p : mined.pairs) got.insert(p.source.identity.signature + "|" + p.target.identity.signature);
    for (const auto& p : five.planted) planted.insert(p.java_method + "(int,int)|" + p.cs_method + "(int,int)");
    if (got != planted || mined.pairs.size() != 5) {
      o.fail("mined " + std::to_string(mined.pairs.size()) + " pairs, planted 5");
    }

    fixture::TwinSpec spec;
    spec.planted = 10;
    const auto ten = fixture::make_twin_repos(root + "/ten", spec);
    const auto mined10 = mine(ten.java_repo, Lang::Java, ten.cs_repo, Lang::CSharp, {}, "twin");
    if (mined10.pairs.size() != 10) o.fail("ten-pair fixture mined " + std::to_string(mined10.pairs.size()));
    const auto split = split_time_segmented(mined10.pairs, 0.7, 0.1);
    if (split.train.size() != 7 || split.valid.size() != 1 || split.test.size() != 2) {
      o.fail("split sizes " + std::to_string(split.train.size()) + "/" + std::to_string(split.valid.size()) + "/" +
             std::to_string(split.test.size()));
    }
    std::int64_t last = 0;
    for (const auto* part : {&split.train, &split.valid, &split.test}) {
      for (const auto& p : *part) {
        if (p.target.commit_time < last) o.fail("split is not chronological");
        last = p.target.commit_time;
      }
    }
    const auto stats = dataset_stats(split);
    const std::vector<AlignedChangePair>* parts[] = {&split.train, &split.valid, &split.test};
    for (std::size_t k = 0; k < 3; ++k) {
      if (!same(stats[k].source, recount(*parts[k], true)) || !same(stats[k].target, recount(*parts[k], false))) {
        o.fail("stats differ from recount for " + stats[k].split);
      }
    }
    if (o.pass) o.detail = "5/5 planted pairs, 0 decoys; split 7/1/2 chronological; stats match recount";
  } catch (const std::exception& e) {
    o.fail(e.what());
  }
  fs::remove_all(root);
  return o;
}

Outcome ac6() {
  Outcome o;
  // 10 pairs; in 4 the target did not change. The other 6 make the same
  // token edit as the source, but around different surrounding code.
  std::vector<ChangeView> data;
  const auto T = [](const std::string& s) { return metric_cases::split(s); };
  for (int i = 0; i < 10; ++i) {
    const std::string n = std::to_string(i);
    ChangeView c;
    c.project = "p";
    c.source_old = T("int f" + n + " ( int a ) { return a + " + n + " ; }");
    c.source_new = T("int f" + n + " ( int a ) { return a * " + n + " ; }");
    c.target_old = T("public int F" + n + " ( int a ) { Log ( a ) ; return a + " + n + " ; }");
    c.target_new = i < 4 ? c.target_old : T("public int F" + n + " ( int a ) { Log ( a ) ; return a * " + n + " ; }");
    data.push_back(c);
  }
  std::vector<Tokens> refs, copies;
  for (const auto& c : data) {
    refs.push_back(c.target_new);
    copies.push_back(baseline_copy(c).hyp);
  }
  const auto report = evaluate(refs, copies, {}, keywords(Lang::CSharp));
  const double expected = 100.0 * 4 / 10;
  if (report.xmatch != expected) o.fail("copy xMatch " + std::to_string(report.xmatch));

  std::size_t eligible = 0, reproduced = 0;
  for (std::size_t i = 4; i < data.size(); ++i) {
    ++eligible;
    const auto p = baseline_copy_edits(data[i]);
    if (p.status == Status::Ok && p.hyp == data[i].target_new) ++reproduced;
  }
  if (reproduced != eligible) o.fail("copy_edits reproduced " + std::to_string(reproduced) + "/" + std::to_string(eligible));
  if (o.pass) {
    o.detail = "copy xMatch " + std::to_string(report.xmatch) + " == 100*4/10; copy_edits " + std::to_string(reproduced) +
               "/" + std::to_string(eligible);
  }
  return o;
}

Outcome ac7() {
  Outcome o;
  std::vector<HybridItem> items;
  for (int len = 10; len <= 200; len += 7) {
    HybridItem it;
    it.target_lang = Lang::CSharp;
    for (int k = 0; k < len; ++k) it.target_old.push_back("w");
    it.ref = {"ref" + std::to_string(len)};
    it.pred_gen = len < 100 ? it.ref : Tokens{"gen"};
    it.pred_edit = len >= 100 ? it.ref : Tokens{"edit"};
    items.push_back(it);
  }
  const auto r = hybrid_select(items);
  // exhaustive scan of the grid, independent of the library's loop
  std::map<int, double> score;
  for (int t = 0; t <= 600; ++t) {
    int hits = 0;
    for (const auto& it : items) {
      const bool gen = t > 0 && static_cast<int>(it.target_old.size()) < t;
      hits += (gen ? it.pred_gen : it.pred_edit) == it.ref;
    }
    score[t] = 100.0 * hits / static_cast<double>(items.size());
  }
  double best = 0;
  for (const auto& [t, s] : score) best = std::max(best, s);
  std::set<int> optimal;
  for (const auto& [t, s] : score) {
    if (s == best) optimal.insert(t);
  }
  const double all_gen = score[600], all_edit = score[0];
  if (!optimal.count(r.threshold)) o.fail("threshold " + std::to_string(r.threshold) + " not optimal");
  if (r.xmatch < all_gen || r.xmatch < all_edit) o.fail("hybrid below a single model");
  if (std::abs(r.xmatch - best) > 1e-12) o.fail("reported xMatch differs from scan");
  if (o.pass) {
    o.detail = "t=" + std::to_string(r.threshold) + " in optimal set [" + std::to_string(*optimal.begin()) + ", " +
               std::to_string(*optimal.rbegin()) + "], xMatch " + std::to_string(r.xmatch) + " vs gen-only " +
               std::to_string(all_gen) + ", edit-only " + std::to_string(all_edit);
  }
  return o;
}

Outcome ac8() {
  Outcome o;
  std::vector<double> base;
  for (int i = 0; i < 40; ++i) base.push_back(static_cast<double>((i * 53) % 100));
  const auto same_r = bootstrap_test(base, base, 10000, 0.95, 42);
  if (same_r.significant) o.fail("identical vectors significant");
  std::vector<double> shifted = base;
  for (auto& x : shifted) x += 10;
  const auto shift_r = bootstrap_test(shifted, base, 10000, 0.95, 42);
  if (!shift_r.significant) o.fail("+10 shift not significant");

  const std::vector<double> a = {80, 20, 60, 55}, b = {70, 30, 40, 50};
  const auto small = bootstrap_test(a, b, 10000, 0.95, 42);
  int hits = 0, draws = 0;
  for (int i = 0; i < 256; ++i) {
    const int idx[4] = {i & 3, (i >> 2) & 3, (i >> 4) & 3, (i >> 6) & 3};
    double d = 0;
    for (int k : idx) d += a[static_cast<std::size_t>(k)] - b[static_cast<std::size_t>(k)];
    ++draws;
    hits += d > 0;
  }
  const double frac = static_cast<double>(hits) / draws;
  if (!small.exhaustive || small.draws != 256 || std::abs(small.consistent_fraction - frac) > 1e-15) {
    o.fail("n=4 result differs from enumeration");
  }
  if (o.pass) {
    o.detail = "identical: not significant; +10: significant (fraction " + std::to_string(shift_r.consistent_fraction) +
               "); n=4: " + std::to_string(hits) + "/256 == library";
  }
  return o;
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + COEDIT_CLI + "\" -q --seed 42 " + args + " 2>>\"" + log.string() + "\"";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

Outcome ac9() {
  Outcome o;
  const auto start = Clock::now();
  const auto root = fs::path(fixture::temp_dir("ac9"));
  try {
    fixture::TwinSpec spec;
    spec.planted = 10;
    const auto repos = fixture::make_twin_repos((root / "repos").string(), spec);
    std::map<std::string, std::string> first;
    for (int run = 0; run < 2; ++run) {
      const auto out = root / ("run" + std::to_string(run));
      fs::create_directories(out);
      const auto log = out / "log.txt";
      const auto q = [](const fs::path& p) { return "\"" + p.string() + "\""; };
      int rc = run_cli("mine --src-repo " + q(repos.java_repo) + " --tgt-repo " + q(repos.cs_repo) +
                           " --project twin --window-days 90 --jaccard-min 0.5 -o " + q(out / "pairs.jsonl"),
                       log);
      rc |= run_cli("split " + q(out / "pairs.jsonl") + " --ratio 0.7,0.1 -o " + q(out / "dataset"), log);
      rc |= run_cli("stats " + q(out / "dataset") + " > " + q(out / "stats.json"), log);
      rc |= run_cli("translate --mode copy --pairs " + q(out / "dataset" / "test.jsonl") + " -o " +
                        q(out / "predictions.jsonl") + " --report " + q(out / "translate_report.json"),
                    log);
      rc |= run_cli("eval --refs " + q(out / "dataset" / "test.jsonl") + " --hyps " + q(out / "predictions.jsonl") +
                        " --src " + q(out / "dataset" / "test.jsonl") + " --csv " + q(out / "eval.csv") + " -o " +
                        q(out / "eval.json"),
                    log);
      if (rc != 0) {
        o.fail("pipeline exited non-zero in run " + std::to_string(run) + ": " + slurp(log));
        break;
      }
      for (const char* f : {"pairs.jsonl", "dataset/train.jsonl", "dataset/valid.jsonl", "dataset/test.jsonl",
                            "stats.json", "predictions.jsonl", "translate_report.json", "eval.json", "eval.csv"}) {
        const auto text = slurp(out / f);
        if (run == 0) {
          if (text.empty()) o.fail(std::string(f) + " is empty");
          first[f] = text;
        } else if (first[f] != text) {
          o.fail(std::string(f) + " differs between runs");
        }
      }
    }
    const double secs = seconds_since(start);
    if (secs >= 60) o.fail("pipeline took " + std::to_string(secs) + " s");
    if (o.pass) o.detail = std::to_string(first.size()) + " outputs byte-identical across 2 runs, " + std::to_string(secs) + " s";
  } catch (const std::exception& e) {
    o.fail(e.what());
  }
  fs::remove_all(root);
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"AC1 round-trip soundness", ac1},  {"AC2 anchor properties", ac2}, {"AC3 worked examples", ac3},
      {"AC4 metric oracles", ac4},        {"AC5 miner fixture", ac5},     {"AC6 baselines", ac6},
      {"AC7 hybrid selection", ac7},      {"AC8 bootstrap", ac8},         {"AC9 determinism", ac9},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << " - " << o.detail << std::endl;
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
