#include "coedit/records.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "coedit/error.hpp"

namespace coedit {

namespace {

// Insertion-ordered so output bytes do not depend on key sorting.
using Json = nlohmann::ordered_json;

Json method_json(const MethodIdentity& id) {
  return Json{{"file", id.file_path}, {"class", id.class_name}, {"signature", id.signature}};
}

MethodIdentity method_from(const Json& j) {
  return {j.at("file").get<std::string>(), j.at("class").get<std::string>(), j.at("signature").get<std::string>()};
}

Lang lang_from(const Json& j, const char* key) {
  const auto text = j.at(key).get<std::string>();
  const auto lang = parse_lang(text);
  if (!lang) throw Error(ErrorCode::InvalidArgument, "unknown language: " + text);
  return *lang;
}

Json parse(std::string_view line) {
  try {
    return Json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad JSON record: ") + e.what());
  }
}

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad record: ") + e.what());
  }
}

}  // namespace

std::string pair_to_json(const AlignedChangePair& p) {
  Json comps = Json::object();
  const char* names[4] = {"added_subtokens", "removed_subtokens", "added_lines", "removed_lines"};
  const double values[4] = {p.components.added_subtokens, p.components.removed_subtokens,
                            p.components.added_lines, p.components.removed_lines};
  for (int k = 0; k < 4; ++k) comps[names[k]] = p.components.active[k] ? Json(values[k]) : Json(nullptr);
  Json j;
  j["project"] = p.project;
  j["src_old"] = p.source.old_body.texts();
  j["src_new"] = p.source.new_body.texts();
  j["tgt_old"] = p.target.old_body.texts();
  j["tgt_new"] = p.target.new_body.texts();
  j["src_commit"] = p.source.commit_id;
  j["tgt_commit"] = p.target.commit_id;
  j["src_time"] = p.source.commit_time;
  j["tgt_time"] = p.target.commit_time;
  j["similarity"] = p.similarity;
  j["similarity_components"] = comps;
  j["src_lang"] = lang_name(p.source.old_body.lang);
  j["tgt_lang"] = lang_name(p.target.old_body.lang);
  j["src_method"] = method_json(p.source.identity);
  j["tgt_method"] = method_json(p.target.identity);
  return j.dump();
}

AlignedChangePair pair_from_json(std::string_view line) {
  const Json j = parse(line);
  return guarded([&] {
    AlignedChangePair p;
    const Lang sl = j.contains("src_lang") ? lang_from(j, "src_lang") : Lang::Java;
    const Lang tl = j.contains("tgt_lang") ? lang_from(j, "tgt_lang") : Lang::CSharp;
    p.project = j.value("project", std::string{});
    p.source.old_body = from_texts(j.at("src_old").get<Tokens>(), sl);
    p.source.new_body = from_texts(j.at("src_new").get<Tokens>(), sl);
    p.target.old_body = from_texts(j.at("tgt_old").get<Tokens>(), tl);
    p.target.new_body = from_texts(j.at("tgt_new").get<Tokens>(), tl);
    p.source.commit_id = j.value("src_commit", std::string{});
    p.target.commit_id = j.value("tgt_commit", std::string{});
    p.source.commit_time = j.value("src_time", std::int64_t{0});
    p.target.commit_time = j.value("tgt_time", std::int64_t{0});
    p.similarity = j.value("similarity", 0.0);
    if (j.contains("similarity_components")) {
      const auto& c = j.at("similarity_components");
      const char* names[4] = {"added_subtokens", "removed_subtokens", "added_lines", "removed_lines"};
      double* values[4] = {&p.components.added_subtokens, &p.components.removed_subtokens,
                           &p.components.added_lines, &p.components.removed_lines};
      for (int k = 0; k < 4; ++k) {
        if (c.contains(names[k]) && !c.at(names[k]).is_null()) {
          *values[k] = c.at(names[k]).get<double>();
          p.components.active[k] = true;
        }
      }
    }
    if (j.contains("src_method")) p.source.identity = method_from(j.at("src_method"));
    if (j.contains("tgt_method")) p.target.identity = method_from(j.at("tgt_method"));
    return p;
  });
}

std::string prediction_to_json(const PredictionRecord& r) {
  Json j;
  j["id"] = r.id;
  j["mode"] = to_string(r.mode);
  j["raw"] = r.prediction.raw;
  j["status"] = to_string(r.prediction.status);
  j["hyp_tokens"] = r.prediction.hyp;
  j["fallback"] = r.prediction.fallback;
  if (!r.prediction.detail.empty()) j["detail"] = r.prediction.detail;
  return j.dump();
}

PredictionRecord prediction_from_json(std::string_view line) {
  const Json j = parse(line);
  return guarded([&] {
    PredictionRecord r;
    r.id = j.at("id").get<std::size_t>();
    const auto mode = parse_mode(j.at("mode").get<std::string>());
    const auto status = parse_status(j.at("status").get<std::string>());
    if (!mode || !status) throw Error(ErrorCode::InvalidArgument, "bad prediction mode or status");
    r.mode = *mode;
    r.prediction.status = *status;
    r.prediction.raw = j.value("raw", std::string{});
    r.prediction.hyp = j.at("hyp_tokens").get<Tokens>();
    r.prediction.fallback = j.value("fallback", false);
    r.prediction.detail = j.value("detail", std::string{});
    return r;
  });
}

std::string report_to_json(const MetricReport& report, const std::string& mode) {
  Json j;
  if (!mode.empty()) j["mode"] = mode;
  j["n"] = report.n;
  j["xmatch"] = report.xmatch;
  j["bleu_corpus"] = report.bleu_corpus;
  j["bleu_sent_avg"] = report.bleu_sent_avg;
  j["codebleu_reduced"] = report.codebleu_reduced;
  if (report.has_src) {
    j["sari"] = report.sari;
    j["gleu"] = report.gleu;
  } else {
    j["sari"] = nullptr;
    j["gleu"] = nullptr;
  }
  return j.dump(2);
}

std::string report_to_csv(const MetricReport& report, const std::vector<std::size_t>& lengths) {
  std::ostringstream out;
  out.precision(17);
  out << "id,target_old_len,xmatch,bleu,codebleu_reduced,sari,gleu\n";
  for (std::size_t i = 0; i < report.examples.size(); ++i) {
    const auto& e = report.examples[i];
    out << i << ',' << (i < lengths.size() ? std::to_string(lengths[i]) : std::string{}) << ',' << e.xmatch << ','
        << e.bleu << ',' << e.codebleu_reduced << ',';
    if (report.has_src) out << e.sari << ',' << e.gleu;
    else out << ',';
    out << '\n';
  }
  return out.str();
}

std::string bootstrap_to_json(const BootstrapResult& r, std::size_t resamples, double level) {
  Json j;
  j["significant"] = r.significant;
  j["p_estimate"] = r.p_estimate;
  j["observed_diff"] = r.observed_diff;
  j["consistent_fraction"] = r.consistent_fraction;
  j["draws"] = r.draws;
  j["exhaustive"] = r.exhaustive;
  j["resamples"] = resamples;
  j["level"] = level;
  j["seed"] = r.seed;
  return j.dump(2);
}

std::string stats_to_json(const std::vector<SplitStats>& stats) {
  const auto side = [](const SideStats& s) {
    return Json{{"count", s.count},         {"avg_old_len", s.avg_old_len}, {"avg_new_len", s.avg_new_len},
                {"avg_edits", s.avg_edits}, {"avg_added", s.avg_added},     {"avg_deleted", s.avg_deleted}};
  };
  Json j = Json::array();
  for (const auto& s : stats) {
    Json row;
    row["split"] = s.split;
    row[std::string(lang_name(s.src_lang))] = side(s.source);
    row[std::string(lang_name(s.tgt_lang))] = side(s.target);
    j.push_back(row);
  }
  return j.dump(2);
}

std::string hybrid_to_json(const HybridResult& r) {
  Json j;
  j["threshold"] = r.threshold;
  j["xmatch"] = r.xmatch;
  Json curve = Json::array();
  for (const auto& [t, x] : r.curve) curve.push_back(Json::array({t, x}));
  j["curve"] = curve;
  return j.dump();
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) lines.push_back(std::move(line));
  }
  return lines;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << text;
  if (!out.flush()) throw Error(ErrorCode::Io, "write failed: " + path);
}

std::vector<AlignedChangePair> read_pairs(const std::string& path) {
  std::vector<AlignedChangePair> out;
  for (const auto& line : read_lines(path)) out.push_back(pair_from_json(line));
  return out;
}

void write_pairs(const std::string& path, const std::vector<AlignedChangePair>& pairs) {
  std::string text;
  for (const auto& p : pairs) text += pair_to_json(p) + "\n";
  write_text(path, text);
}

std::vector<PredictionRecord> read_predictions(const std::string& path) {
  std::vector<PredictionRecord> out;
  for (const auto& line : read_lines(path)) out.push_back(prediction_from_json(line));
  return out;
}

void write_predictions(const std::string& path, const std::vector<PredictionRecord>& records) {
  std::string text;
  for (const auto& r : records) text += prediction_to_json(r) + "\n";
  write_text(path, text);
}

std::vector<Tokens> read_token_lists(const std::string& path, TokenRole role, Direction direction) {
  std::vector<Tokens> out;
  for (const auto& line : read_lines(path)) {
    const Json j = parse(line);
    out.push_back(guarded([&]() -> Tokens {
      if (j.contains("hyp_tokens")) return j.at("hyp_tokens").get<Tokens>();
      if (j.contains("tokens")) return j.at("tokens").get<Tokens>();
      const auto view = orient(pair_from_json(line), direction);
      switch (role) {
        case TokenRole::Reference: return view.target_new;
        case TokenRole::Source: return view.target_old;
        case TokenRole::Hypothesis: break;
      }
      throw Error(ErrorCode::InvalidArgument, "record carries no hypothesis tokens");
    }));
  }
  return out;
}

}  // namespace coedit
