#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <json.hpp>

#include "coedit/config.hpp"
#include "coedit/error.hpp"
#include "coedit/records.hpp"
#include "support/twin_repos.hpp"
#include "test_support.hpp"

using namespace coedit;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no exception");
  return ErrorCode::InvalidArgument;
}

AlignedChangePair sample_pair() {
  AlignedChangePair p;
  p.project = "proj";
  p.source = {{"a/B.java", "B", "f(int)"}, lex("int f(int a) { return a; }", Lang::Java),
              lex("int f(int a) { return a + 1; }", Lang::Java), "abc", 100};
  p.target = {{"a/B.cs", "B", "F(int)"}, lex("int F(int a) { return a; }", Lang::CSharp),
              lex("int F(int a) { return a + 1; }", Lang::CSharp), "def", 200};
  p.components = change_similarity(p.source, p.target);
  p.similarity = p.components.mean();
  return p;
}

}  // namespace

TEST_CASE("config file and overrides") {
  Config c;
  load_config_text(c, R"({"direction": "cs2java", "window_days": 30, "split_ratios": [0.8, 0.1], "seed": 7,
                          "backend": {"endpoint": "http://h:1/x", "samples": 5}})");
  CHECK(c.direction.source == Lang::CSharp);
  CHECK(c.window_days == 30);
  CHECK(c.train_ratio == doctest::Approx(0.8));
  CHECK(c.seed == 7u);
  CHECK(c.backend.endpoint == "http://h:1/x");
  CHECK(c.backend.samples == 5);
  set_option(c, "jaccard_min", "0.6");
  CHECK(c.jaccard_min == doctest::Approx(0.6));
  validate(c);

  CHECK(code_of([&] { set_option(c, "backend.token", "x"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { load_config_text(c, R"({"backend": {"token": "leak"}})"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { set_option(c, "nope", "1"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { set_option(c, "seed", "-1"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { load_config_text(c, "{"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { load_config_file(c, "/nonexistent/cfg.json"); }) == ErrorCode::Io);
  Config bad;
  bad.train_ratio = 0.9;
  bad.valid_ratio = 0.2;
  CHECK(code_of([&] { validate(bad); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("backend token comes from the environment") {
  ::setenv(kBackendTokenEnv, "tok123", 1);
  Config c;
  apply_environment(c);
  CHECK(c.backend.token == "tok123");
  ::unsetenv(kBackendTokenEnv);
}

TEST_CASE("pair records round trip") {
  const auto p = sample_pair();
  const auto line = pair_to_json(p);
  CHECK(line.find('\n') == std::string::npos);
  const auto j = nlohmann::json::parse(line);
  for (const char* key : {"project", "src_old", "src_new", "tgt_old", "tgt_new", "src_commit", "tgt_commit", "src_time",
                          "tgt_time", "similarity"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["src_old"].is_array());
  const auto back = pair_from_json(line);
  CHECK(pair_to_json(back) == line);
  CHECK(back.source.old_body.texts() == p.source.old_body.texts());
  CHECK(back.target.identity == p.target.identity);
  CHECK(back.source.commit_time == 100);
  CHECK(code_of([] { pair_from_json("{\"project\": 1}"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("prediction records round trip") {
  PredictionRecord r;
  r.id = 4;
  r.mode = Mode::MetaEdits;
  r.prediction.raw = "<Delete> x <DeleteEnd>";
  r.prediction.status = Status::ParseFailed;
  r.prediction.hyp = toks("a b");
  r.prediction.fallback = true;
  r.prediction.detail = "why";
  const auto line = prediction_to_json(r);
  const auto j = nlohmann::json::parse(line);
  CHECK(j["status"] == "parse_failed");
  CHECK(j["mode"] == "meta");
  const auto back = prediction_from_json(line);
  CHECK(prediction_to_json(back) == line);
}

TEST_CASE("token lists from the three record shapes") {
  const auto dir = fixture::temp_dir("records");
  const auto p = sample_pair();
  write_pairs(dir + "/pairs.jsonl", {p, p});
  Direction java2cs;
  CHECK(read_token_lists(dir + "/pairs.jsonl", TokenRole::Reference, java2cs)[1] == p.target.new_body.texts());
  CHECK(read_token_lists(dir + "/pairs.jsonl", TokenRole::Source, java2cs)[0] == p.target.old_body.texts());
  const Direction cs2java{Lang::CSharp, Lang::Java};
  CHECK(read_token_lists(dir + "/pairs.jsonl", TokenRole::Reference, cs2java)[0] == p.source.new_body.texts());
  write_text(dir + "/t.jsonl", "{\"tokens\": [\"a\", \"b\"]}\n\n{\"tokens\": []}\n");
  const auto lists = read_token_lists(dir + "/t.jsonl", TokenRole::Hypothesis, java2cs);
  REQUIRE(lists.size() == 2);
  CHECK(lists[0] == toks("a b"));
  CHECK(code_of([&] { read_lines(dir + "/missing.jsonl"); }) == ErrorCode::Io);
  std::filesystem::remove_all(dir);
}

TEST_CASE("report json keeps sari and gleu null without sources") {
  const auto r = evaluate({toks("a b")}, {toks("a b")}, {}, keywords(Lang::CSharp));
  const auto j = nlohmann::json::parse(report_to_json(r, "copy"));
  CHECK(j["sari"].is_null());
  CHECK(j["xmatch"] == 100.0);
  const auto csv = report_to_csv(r, {2});
  CHECK(csv.rfind("id,target_old_len,xmatch,bleu,codebleu_reduced,sari,gleu\n", 0) == 0);
}
