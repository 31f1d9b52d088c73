// coedit command line. Talks to the library only through coedit.h.
#include <coedit/coedit.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kBackend = 3 };

int exit_code(coedit_status s) {
  switch (s) {
    case COEDIT_OK: return kOk;
    case COEDIT_E_INVALID_ARGUMENT: return kUsage;
    case COEDIT_E_BACKEND:
    case COEDIT_E_BACKEND_UNREACHABLE: return kBackend;
    default: return kData;
  }
}

int log_level = 1;  // 0 quiet, 1 info, 2 debug

// One JSON object per line on stderr.
void log_event(int level, const std::string& event, nlohmann::ordered_json fields = nlohmann::ordered_json::object()) {
  if (level > log_level) return;
  nlohmann::ordered_json line;
  line["level"] = level >= 2 ? "debug" : (level == 1 ? "info" : "error");
  line["event"] = event;
  for (auto& [k, v] : fields.items()) line[k] = v;
  std::cerr << line.dump() << '\n';
}

struct CliError {
  int code;
};

class Session {
 public:
  Session() {
    if (coedit_session_new(&s_) != COEDIT_OK) throw CliError{kData};
  }
  ~Session() { coedit_session_free(s_); }
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  // Throws CliError after reporting when the call failed.
  void check(coedit_status status) const {
    if (status == COEDIT_OK) return;
    report(status);
    throw CliError{exit_code(status)};
  }
  void report(coedit_status status) const {
    nlohmann::ordered_json f;
    f["status"] = coedit_status_name(status);
    f["message"] = coedit_session_last_error(s_);
    if (coedit_session_last_error_offset(s_) >= 0) f["offset"] = coedit_session_last_error_offset(s_);
    log_event(0, "error", f);
  }
  coedit_session* get() const { return s_; }

 private:
  coedit_session* s_ = nullptr;
};

// Owns a coedit_buffer.
class Buffer {
 public:
  Buffer() = default;
  ~Buffer() { coedit_buffer_free(b_); }
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;
  coedit_buffer** out() { return &b_; }
  std::string str() const { return b_ ? std::string(coedit_buffer_data(b_), coedit_buffer_size(b_)) : std::string(); }
  bool filled() const { return b_ != nullptr; }

 private:
  coedit_buffer* b_ = nullptr;
};

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    log_event(0, "error", {{"status", "Io"}, {"message", "cannot read " + path}});
    throw CliError{kData};
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    log_event(0, "error", {{"status", "Io"}, {"message", "cannot write " + path}});
    throw CliError{kData};
  }
}

std::string ensure_newline(std::string s) {
  if (!s.empty() && s.back() != '\n') s += '\n';
  return s;
}

std::string lines_of(const std::string& json_array) {
  std::string out;
  for (const auto& t : nlohmann::json::parse(json_array)) out += t.get<std::string>() + "\n";
  return out;
}

// Token list for a file: lexed source, or one token per line with --tokens.
std::string tokens_json(const Session& s, const std::string& path, const std::string& lang, bool pre_tokenized) {
  const std::string text = read_input(path);
  if (pre_tokenized) {
    nlohmann::json arr = nlohmann::json::array();
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) arr.push_back(line);
    }
    return arr.dump();
  }
  Buffer b;
  s.check(coedit_tokenize(s.get(), text.data(), text.size(), lang.c_str(), 0, b.out()));
  return b.str();
}

std::string nth_line(const std::string& path, std::size_t index) {
  std::istringstream in(read_input(path));
  std::size_t i = 0;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    if (i++ == index) return line;
  }
  log_event(0, "error", {{"status", "InvalidArgument"}, {"message", "no record " + std::to_string(index) + " in " + path}});
  throw CliError{kUsage};
}

const char* opt(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multilingual co-editing toolkit: edit scripts, change mining, translation and evaluation."};
  app.require_subcommand(1);
  app.set_version_flag("--version", coedit_version());

  std::string config_path, direction;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  bool quiet = false, verbose = false;
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--direction", direction, "java2cs or cs2java")->check(CLI::IsMember({"java2cs", "cs2java"}));
  app.add_option("--seed", seed, "Seed for every random choice");
  app.add_option("--set", overrides, "Config override key=value (repeatable)");
  app.add_flag("-q,--quiet", quiet, "Only log errors");
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  // tokenize
  std::string tok_lang = "a", tok_file = "-";
  bool tok_sub = false;
  auto* tokenize = app.add_subcommand("tokenize", "Lex a source file, one token per line");
  tokenize->add_option("--lang", tok_lang, "a (Java) or b (C#)")->check(CLI::IsMember({"a", "b", "java", "cs"}));
  tokenize->add_flag("--subtokens", tok_sub, "Emit subtokens instead of tokens");
  tokenize->add_option("file", tok_file, "Source file or -");

  // diff / disambiguate
  std::string ed_lang, ed_old, ed_new;
  bool ed_tokens = false;
  auto* diff = app.add_subcommand("diff", "Concise edit script between two versions");
  auto* disamb = app.add_subcommand("disambiguate", "Unambiguous edit script between two versions");
  for (auto* sub : {diff, disamb}) {
    sub->add_option("--lang", ed_lang, "a or b (default: source side of --direction)");
    sub->add_flag("--tokens", ed_tokens, "Inputs are one token per line");
    sub->add_option("--old,old", ed_old, "Old version")->required();
    sub->add_option("--new,new", ed_new, "New version")->required();
  }

  // apply
  std::string ap_script;
  auto* apply = app.add_subcommand("apply", "Apply an unambiguous script; prints tokens one per line");
  apply->add_option("--lang", ed_lang, "a or b");
  apply->add_flag("--tokens", ed_tokens, "Old version is one token per line");
  apply->add_option("--script", ap_script, "Script file or -")->required();
  apply->add_option("--old,old", ed_old, "Old version")->required();

  // parse-script
  std::string ps_form = "unambiguous", ps_file = "-";
  auto* parse = app.add_subcommand("parse-script", "Validate a script and print its canonical text");
  parse->add_option("--form", ps_form)->check(CLI::IsMember({"concise", "unambiguous", "meta"}));
  parse->add_option("file", ps_file, "Script file or -");

  // mine
  std::string mi_src, mi_tgt, mi_project, mi_out;
  std::optional<double> mi_window, mi_jaccard;
  auto* mine = app.add_subcommand("mine", "Mine aligned method changes from two repositories");
  mine->add_option("--src-repo", mi_src)->required();
  mine->add_option("--tgt-repo", mi_tgt)->required();
  mine->add_option("--project", mi_project, "Project name (default: source repo directory name)");
  mine->add_option("--window-days", mi_window);
  mine->add_option("--jaccard-min", mi_jaccard);
  mine->add_option("-o,--output", mi_out, "Pairs JSONL (default stdout)");

  // split
  std::string sp_pairs, sp_ratio, sp_out;
  auto* split = app.add_subcommand("split", "Time-segmented train/valid/test split");
  split->add_option("pairs", sp_pairs, "Pairs JSONL")->required();
  split->add_option("--ratio", sp_ratio, "train,valid (default 0.7,0.1)");
  split->add_option("-o,--output", sp_out, "Output directory")->required();

  // stats
  std::string st_dir;
  auto* stats = app.add_subcommand("stats", "Dataset statistics of a split directory");
  stats->add_option("dataset", st_dir)->required();

  // prompt
  std::string pr_mode, pr_pairs, pr_exemplars;
  std::size_t pr_index = 0;
  auto* prompt = app.add_subcommand("prompt", "Print the model input for one pair");
  const auto modes = CLI::IsMember({"copy", "copy_edits", "edits", "meta", "generation", "fewshot"});
  prompt->add_option("--mode", pr_mode)->required()->check(modes);
  prompt->add_option("--pairs", pr_pairs, "Pairs JSONL")->required();
  prompt->add_option("--index", pr_index, "Record index (default 0)");
  prompt->add_option("--exemplars", pr_exemplars, "Exemplar pool for fewshot");

  // translate
  std::string tr_mode, tr_pairs, tr_exemplars, tr_out, tr_report;
  auto* translate = app.add_subcommand("translate", "Run a translation mode over a pairs file");
  translate->add_option("--mode", tr_mode)->required()->check(modes);
  translate->add_option("--pairs", tr_pairs)->required();
  translate->add_option("--exemplars", tr_exemplars, "Exemplar pool for fewshot");
  translate->add_option("-o,--output", tr_out, "Predictions JSONL")->required();
  translate->add_option("--report", tr_report, "Metric report (default stdout)");

  // eval
  std::string ev_refs, ev_hyps, ev_src, ev_csv, ev_out;
  auto* eval = app.add_subcommand("eval", "Score predictions against references");
  eval->add_option("--refs", ev_refs)->required();
  eval->add_option("--hyps", ev_hyps)->required();
  eval->add_option("--src", ev_src, "Sources for SARI and GLEU");
  eval->add_option("--csv", ev_csv, "Per-example CSV");
  eval->add_option("-o,--output", ev_out, "Report JSON (default stdout)");

  // compare
  std::string cmp_b, cmp_metric = "bleu";
  auto* compare = app.add_subcommand("compare", "Paired bootstrap test between two prediction files");
  compare->add_option("--refs", ev_refs)->required();
  compare->add_option("--hyps-a", ev_hyps)->required();
  compare->add_option("--hyps-b", cmp_b)->required();
  compare->add_option("--src", ev_src);
  compare->add_option("--metric", cmp_metric)->check(CLI::IsMember({"xmatch", "bleu", "codebleu_reduced", "sari", "gleu"}));

  // hybrid-select
  std::string hy_refs, hy_gen, hy_edit;
  int hy_max = -1;
  auto* hybrid = app.add_subcommand("hybrid-select", "Grid-search the generation/edit length threshold");
  hybrid->add_option("--refs", hy_refs, "Validation pairs JSONL")->required();
  hybrid->add_option("--gen", hy_gen, "Generation predictions")->required();
  hybrid->add_option("--edit", hy_edit, "Edit-model predictions")->required();
  hybrid->add_option("--grid-max", hy_max, "Largest threshold tried (default 600)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  log_level = quiet ? 0 : (verbose ? 2 : 1);

  try {
    Session s;
    if (!config_path.empty()) s.check(coedit_session_load_config(s.get(), config_path.c_str()));
    const auto set = [&](const std::string& key, const std::string& value) {
      s.check(coedit_session_set_option(s.get(), key.c_str(), value.c_str()));
    };
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        log_event(0, "error", {{"status", "InvalidArgument"}, {"message", "--set expects key=value"}});
        return kUsage;
      }
      set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!direction.empty()) set("direction", direction);
    if (seed) set("seed", std::to_string(*seed));
    const std::string side = direction == "cs2java" ? "b" : "a";
    const std::string lang = ed_lang.empty() ? side : ed_lang;

    Buffer out;
    if (*tokenize) {
      const std::string text = read_input(tok_file);
      s.check(coedit_tokenize(s.get(), text.data(), text.size(), tok_lang.c_str(), tok_sub ? 1 : 0, out.out()));
      std::cout << lines_of(out.str());
    } else if (*diff || *disamb) {
      const auto o = tokens_json(s, ed_old, lang, ed_tokens);
      const auto n = tokens_json(s, ed_new, lang, ed_tokens);
      s.check((*diff ? coedit_diff : coedit_disambiguate)(s.get(), o.c_str(), n.c_str(), out.out()));
      std::cout << ensure_newline(out.str());
    } else if (*apply) {
      const auto script = read_input(ap_script);
      const auto o = tokens_json(s, ed_old, lang, ed_tokens);
      s.check(coedit_apply(s.get(), script.c_str(), o.c_str(), out.out()));
      std::cout << lines_of(out.str());
    } else if (*parse) {
      const auto script = read_input(ps_file);
      s.check(coedit_parse_script(s.get(), script.c_str(), ps_form.c_str(), out.out()));
      std::cout << ensure_newline(out.str());
    } else if (*mine) {
      if (mi_window) set("window_days", std::to_string(*mi_window));
      if (mi_jaccard) set("jaccard_min", std::to_string(*mi_jaccard));
      s.check(coedit_mine(s.get(), mi_src.c_str(), mi_tgt.c_str(), opt(mi_project), out.out()));
      const auto text = out.str();
      write_output(mi_out, text);
      log_event(1, "mine", {{"pairs", std::count(text.begin(), text.end(), '\n')}});
    } else if (*split) {
      if (!sp_ratio.empty()) set("split_ratios", sp_ratio);
      s.check(coedit_split(s.get(), sp_pairs.c_str(), sp_out.c_str(), out.out()));
      log_event(1, "split", nlohmann::ordered_json::parse(out.str()));
    } else if (*stats) {
      s.check(coedit_stats(s.get(), st_dir.c_str(), out.out()));
      std::cout << ensure_newline(out.str());
    } else if (*prompt) {
      const auto record = nth_line(pr_pairs, pr_index);
      s.check(coedit_prompt(s.get(), record.c_str(), pr_mode.c_str(), opt(pr_exemplars), out.out()));
      std::cout << ensure_newline(out.str());
    } else if (*translate) {
      const auto status = coedit_translate(s.get(), tr_pairs.c_str(), tr_mode.c_str(), opt(tr_exemplars),
                                           tr_out.c_str(), out.out());
      if (out.filled()) write_output(tr_report, ensure_newline(out.str()));
      s.check(status);
      log_event(1, "translate", {{"mode", tr_mode}, {"predictions", tr_out}});
    } else if (*eval) {
      s.check(coedit_eval(s.get(), ev_refs.c_str(), ev_hyps.c_str(), opt(ev_src), opt(ev_csv), out.out()));
      write_output(ev_out, ensure_newline(out.str()));
    } else if (*compare) {
      s.check(coedit_compare(s.get(), ev_refs.c_str(), ev_hyps.c_str(), cmp_b.c_str(), opt(ev_src),
                             cmp_metric.c_str(), out.out()));
      std::cout << ensure_newline(out.str());
    } else if (*hybrid) {
      s.check(coedit_hybrid_select(s.get(), hy_refs.c_str(), hy_gen.c_str(), hy_edit.c_str(), hy_max, out.out()));
      std::cout << ensure_newline(out.str());
    }
    std::cout.flush();
    return std::cout ? kOk : kData;
  } catch (const CliError& e) {
    return e.code;
  } catch (const nlohmann::json::exception& e) {
    log_event(0, "error", {{"status", "Internal"}, {"message", e.what()}});
    return kData;
  }
}
