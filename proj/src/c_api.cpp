#include "coedit/coedit.h"

#include <filesystem>
#include <json.hpp>
#include <memory>
#include <new>
#include <string>

#include "coedit/config.hpp"
#include "coedit/edit_script.hpp"
#include "coedit/metrics.hpp"
#include "coedit/miner.hpp"
#include "coedit/records.hpp"
#include "coedit/translate.hpp"

struct coedit_session {
  coedit::Config config;
  std::string last_error;
  long long last_offset = -1;
};

struct coedit_buffer {
  std::string data;
};

namespace {

using namespace coedit;

coedit_status status_of(ErrorCode code) { return static_cast<coedit_status>(static_cast<int>(code) + 1); }

coedit_status fail(coedit_session* s, coedit_status status, std::string message, long long offset = -1) {
  if (s) {
    s->last_error = std::move(message);
    s->last_offset = offset;
  }
  return status;
}

// Runs `body` and turns exceptions into status codes plus session state.
template <typename Body>
coedit_status guarded(coedit_session* s, Body&& body) {
  if (!s) return COEDIT_E_INVALID_ARGUMENT;
  s->last_error.clear();
  s->last_offset = -1;
  try {
    return body();
  } catch (const Error& e) {
    const auto pos = e.position();
    return fail(s, status_of(e.code()), e.what(), pos ? static_cast<long long>(*pos) : -1);
  } catch (const nlohmann::json::exception& e) {
    return fail(s, COEDIT_E_INVALID_ARGUMENT, std::string("InvalidArgument: ") + e.what());
  } catch (const std::bad_alloc&) {
    return fail(s, COEDIT_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(s, COEDIT_E_INTERNAL, e.what());
  }
}

coedit_status emit(coedit_buffer** out, std::string text) {
  if (!out) throw Error(ErrorCode::InvalidArgument, "output pointer is null");
  *out = new coedit_buffer{std::move(text)};
  return COEDIT_OK;
}

std::string need(const char* text, const char* what) {
  if (!text) throw Error(ErrorCode::InvalidArgument, std::string(what) + " is null");
  return text;
}

Tokens tokens_json(const char* text, const char* what) {
  const auto j = nlohmann::json::parse(need(text, what));
  if (!j.is_array()) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be a JSON array");
  return j.get<Tokens>();
}

Lang lang_arg(const char* text) {
  const auto lang = parse_lang(need(text, "lang"));
  if (!lang) throw Error(ErrorCode::InvalidArgument, std::string("unknown language: ") + text);
  return *lang;
}

Mode mode_arg(const char* text) {
  const auto mode = parse_mode(need(text, "mode"));
  if (!mode) throw Error(ErrorCode::InvalidArgument, std::string("unknown mode: ") + text);
  return *mode;
}

std::vector<ChangeView> views(const std::vector<AlignedChangePair>& pairs, Direction d) {
  std::vector<ChangeView> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(orient(p, d));
  return out;
}

std::vector<ExampleScores> per_example(const coedit_session* s, const std::vector<Tokens>& refs,
                                       const std::vector<Tokens>& hyps, const std::vector<Tokens>& srcs) {
  return evaluate(refs, hyps, srcs, keywords(s->config.direction.target)).examples;
}

double metric_value(const ExampleScores& e, const std::string& metric) {
  if (metric == "xmatch") return e.xmatch;
  if (metric == "bleu") return e.bleu;
  if (metric == "codebleu_reduced") return e.codebleu_reduced;
  if (metric == "sari") return e.sari;
  if (metric == "gleu") return e.gleu;
  throw Error(ErrorCode::InvalidArgument, "unknown metric: " + metric);
}

}  // namespace

extern "C" {

const char* coedit_version(void) { return "0.1.0"; }

const char* coedit_status_name(coedit_status status) {
  if (status == COEDIT_OK) return "Ok";
  if (status == COEDIT_E_INTERNAL) return "Internal";
  if (status > COEDIT_OK && status < COEDIT_E_INTERNAL) {
    return to_string(static_cast<ErrorCode>(static_cast<int>(status) - 1));
  }
  return "Unknown";
}

coedit_status coedit_session_new(coedit_session** out) {
  if (!out) return COEDIT_E_INVALID_ARGUMENT;
  try {
    *out = new coedit_session;
    apply_environment((*out)->config);
  } catch (const std::bad_alloc&) {
    return COEDIT_E_INTERNAL;
  }
  return COEDIT_OK;
}

void coedit_session_free(coedit_session* session) { delete session; }

coedit_status coedit_session_load_config(coedit_session* s, const char* path) {
  return guarded(s, [&] {
    Config next = s->config;
    load_config_file(next, need(path, "path"));
    validate(next);
    s->config = next;
    return COEDIT_OK;
  });
}

coedit_status coedit_session_set_option(coedit_session* s, const char* key, const char* value) {
  return guarded(s, [&] {
    Config next = s->config;
    set_option(next, need(key, "key"), need(value, "value"));
    validate(next);
    s->config = next;
    return COEDIT_OK;
  });
}

const char* coedit_session_last_error(const coedit_session* s) { return s ? s->last_error.c_str() : ""; }

long long coedit_session_last_error_offset(const coedit_session* s) { return s ? s->last_offset : -1; }

const char* coedit_buffer_data(const coedit_buffer* b) { return b ? b->data.c_str() : ""; }

size_t coedit_buffer_size(const coedit_buffer* b) { return b ? b->data.size() : 0; }

void coedit_buffer_free(coedit_buffer* b) { delete b; }

coedit_status coedit_tokenize(coedit_session* s, const char* source, size_t length, const char* lang,
                              int want_subtokens, coedit_buffer** out) {
  return guarded(s, [&] {
    if (!source && length > 0) throw Error(ErrorCode::InvalidArgument, "source is null");
    const auto seq = lex(std::string_view(source ? source : "", length), lang_arg(lang));
    const nlohmann::json j = want_subtokens ? subtoken_list(seq) : seq.texts();
    return emit(out, j.dump());
  });
}

coedit_status coedit_diff(coedit_session* s, const char* old_json, const char* new_json, coedit_buffer** out) {
  return guarded(s, [&] {
    return emit(out, serialize(diff(tokens_json(old_json, "old tokens"), tokens_json(new_json, "new tokens"))));
  });
}

coedit_status coedit_disambiguate(coedit_session* s, const char* old_json, const char* new_json,
                                  coedit_buffer** out) {
  return guarded(s, [&] {
    const auto old_tokens = tokens_json(old_json, "old tokens");
    const auto concise = diff(old_tokens, tokens_json(new_json, "new tokens"));
    return emit(out, serialize(disambiguate(concise, old_tokens)));
  });
}

coedit_status coedit_apply(coedit_session* s, const char* script, const char* old_json, coedit_buffer** out) {
  return guarded(s, [&] {
    const auto parsed = parse_script(need(script, "script"), ScriptForm::Unambiguous);
    const nlohmann::json j = coedit::apply(parsed, tokens_json(old_json, "old tokens"));
    return emit(out, j.dump());
  });
}

coedit_status coedit_parse_script(coedit_session* s, const char* script, const char* form, coedit_buffer** out) {
  return guarded(s, [&] {
    const std::string text = need(script, "script");
    const std::string f = need(form, "form");
    if (f == "meta") return emit(out, serialize(parse_meta(text)));
    if (f == "concise") return emit(out, serialize(parse_script(text, ScriptForm::Concise)));
    if (f == "unambiguous") return emit(out, serialize(parse_script(text, ScriptForm::Unambiguous)));
    throw Error(ErrorCode::InvalidArgument, "form must be concise, unambiguous or meta");
  });
}

coedit_status coedit_make_meta(coedit_session* s, const char* source_script, const char* target_script,
                               coedit_buffer** out) {
  return guarded(s, [&] {
    const auto src = parse_script(need(source_script, "source script"), ScriptForm::Unambiguous);
    const auto tgt = parse_script(need(target_script, "target script"), ScriptForm::Unambiguous);
    return emit(out, serialize(make_meta(src, tgt)));
  });
}

coedit_status coedit_mine(coedit_session* s, const char* src_repo, const char* tgt_repo, const char* project,
                          coedit_buffer** out) {
  return guarded(s, [&] {
    const auto& c = s->config;
    const std::string src = need(src_repo, "source repository");
    std::string name = project ? project : "";
    if (name.empty()) name = std::filesystem::path(src).lexically_normal().filename().string();
    if (name.empty()) name = std::filesystem::path(src).lexically_normal().parent_path().filename().string();
    const AlignOptions options{c.window_days, c.jaccard_min, c.identifier_cutoff};
    const auto result = mine(src, c.direction.source, need(tgt_repo, "target repository"), c.direction.target,
                             options, name);
    std::string text;
    for (const auto& p : result.pairs) text += pair_to_json(p) + "\n";
    return emit(out, std::move(text));
  });
}

coedit_status coedit_split(coedit_session* s, const char* pairs_path, const char* out_dir, coedit_buffer** out) {
  return guarded(s, [&] {
    const auto split = split_time_segmented(read_pairs(need(pairs_path, "pairs path")), s->config.train_ratio,
                                            s->config.valid_ratio);
    const std::filesystem::path dir = need(out_dir, "output directory");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
    write_pairs((dir / "train.jsonl").string(), split.train);
    write_pairs((dir / "valid.jsonl").string(), split.valid);
    write_pairs((dir / "test.jsonl").string(), split.test);
    const nlohmann::ordered_json j = {
        {"train", split.train.size()}, {"valid", split.valid.size()}, {"test", split.test.size()}};
    return emit(out, j.dump());
  });
}

coedit_status coedit_stats(coedit_session* s, const char* dataset_dir, coedit_buffer** out) {
  return guarded(s, [&] {
    const std::filesystem::path dir = need(dataset_dir, "dataset directory");
    if (!std::filesystem::is_directory(dir)) throw Error(ErrorCode::Io, dir.string() + " is not a directory");
    DatasetSplit split;
    const auto load = [&](const char* name, std::vector<AlignedChangePair>& into) {
      const auto file = dir / name;
      if (std::filesystem::exists(file)) into = read_pairs(file.string());
    };
    load("train.jsonl", split.train);
    load("valid.jsonl", split.valid);
    load("test.jsonl", split.test);
    return emit(out, stats_to_json(dataset_stats(split)));
  });
}

coedit_status coedit_prompt(coedit_session* s, const char* pair_json, const char* mode, const char* exemplars_path,
                            coedit_buffer** out) {
  return guarded(s, [&] {
    const auto m = mode_arg(mode);
    const auto view = orient(pair_from_json(need(pair_json, "pair record")), s->config.direction);
    std::vector<ChangeView> pool;
    if (exemplars_path) pool = views(read_pairs(exemplars_path), s->config.direction);
    std::vector<const ChangeView*> exemplars;
    if (m == Mode::FewShot) exemplars = select_exemplars(pool, view, s->config.fewshot_k, s->config.seed);
    return emit(out, build_input(view, m, exemplars).input_text);
  });
}

coedit_status coedit_parse_output(coedit_session* s, const char* raw, const char* mode, const char* pair_json,
                                  coedit_buffer** out) {
  return guarded(s, [&] {
    const auto m = mode_arg(mode);
    const auto view = orient(pair_from_json(need(pair_json, "pair record")), s->config.direction);
    PredictionRecord r;
    r.mode = m;
    r.prediction = parse_output(need(raw, "raw output"), m, view.target_old, view.target_lang);
    return emit(out, prediction_to_json(r));
  });
}

coedit_status coedit_translate(coedit_session* s, const char* pairs_path, const char* mode,
                               const char* exemplars_path, const char* predictions_path, coedit_buffer** out) {
  return guarded(s, [&] {
    const auto& c = s->config;
    const auto m = mode_arg(mode);
    const auto dataset = views(read_pairs(need(pairs_path, "pairs path")), c.direction);
    const std::string pred_path = need(predictions_path, "predictions path");
    std::vector<ChangeView> pool;
    if (exemplars_path) pool = views(read_pairs(exemplars_path), c.direction);

    BatchOptions options;
    options.mode = m;
    options.direction = c.direction;
    options.samples = c.backend.samples;
    options.max_tokens = c.backend.max_tokens;
    options.parallelism = c.backend.parallelism;
    options.fewshot_k = c.fewshot_k;
    options.seed = c.seed;
    std::unique_ptr<CompletionBackend> backend;
    if (uses_backend(m)) {
      if (c.backend.endpoint.empty()) {
        throw Error(ErrorCode::InvalidArgument, "mode " + std::string(to_string(m)) + " needs backend.endpoint");
      }
      backend = std::make_unique<HttpBackend>(c.backend);
    }
    const auto batch = run_batch(dataset, backend.get(), options, pool);
    write_predictions(pred_path, batch.records);

    std::vector<Tokens> refs, hyps, srcs;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      refs.push_back(dataset[i].target_new);
      srcs.push_back(dataset[i].target_old);
      hyps.push_back(batch.records[i].prediction.hyp);
    }
    std::string report = "{}";
    if (!dataset.empty()) report = report_to_json(evaluate(refs, hyps, srcs, keywords(c.direction.target)), std::string(to_string(m)));
    emit(out, report);
    if (batch.aborted) {
      return fail(s, COEDIT_E_BACKEND_UNREACHABLE, "BackendUnreachable: " + batch.abort_reason);
    }
    return COEDIT_OK;
  });
}

coedit_status coedit_eval(coedit_session* s, const char* refs_path, const char* hyps_path, const char* src_path,
                          const char* csv_path, coedit_buffer** out) {
  return guarded(s, [&] {
    const auto d = s->config.direction;
    const auto refs = read_token_lists(need(refs_path, "refs path"), TokenRole::Reference, d);
    const auto hyps = read_token_lists(need(hyps_path, "hyps path"), TokenRole::Hypothesis, d);
    std::vector<Tokens> srcs;
    if (src_path) srcs = read_token_lists(src_path, TokenRole::Source, d);
    const auto report = evaluate(refs, hyps, srcs, keywords(d.target));
    if (csv_path) {
      std::vector<std::size_t> lengths;
      for (const auto& t : srcs) lengths.push_back(hybrid_length(t, d.target));
      write_text(csv_path, report_to_csv(report, lengths));
    }
    return emit(out, report_to_json(report, ""));
  });
}

coedit_status coedit_compare(coedit_session* s, const char* refs_path, const char* hyps_a_path,
                             const char* hyps_b_path, const char* src_path, const char* metric,
                             coedit_buffer** out) {
  return guarded(s, [&] {
    const auto d = s->config.direction;
    const std::string m = need(metric, "metric");
    const auto refs = read_token_lists(need(refs_path, "refs path"), TokenRole::Reference, d);
    const auto a = read_token_lists(need(hyps_a_path, "first hyps path"), TokenRole::Hypothesis, d);
    const auto b = read_token_lists(need(hyps_b_path, "second hyps path"), TokenRole::Hypothesis, d);
    std::vector<Tokens> srcs;
    if (src_path) srcs = read_token_lists(src_path, TokenRole::Source, d);
    if ((m == "sari" || m == "gleu") && srcs.empty()) {
      throw Error(ErrorCode::InvalidArgument, m + " needs source sequences");
    }
    std::vector<double> sa, sb;
    for (const auto& e : per_example(s, refs, a, srcs)) sa.push_back(metric_value(e, m));
    for (const auto& e : per_example(s, refs, b, srcs)) sb.push_back(metric_value(e, m));
    const auto r = bootstrap_test(sa, sb, s->config.resamples, s->config.level, s->config.seed);
    return emit(out, bootstrap_to_json(r, s->config.resamples, s->config.level));
  });
}

coedit_status coedit_hybrid_select(coedit_session* s, const char* refs_path, const char* gen_path,
                                   const char* edit_path, int grid_max, coedit_buffer** out) {
  return guarded(s, [&] {
    const auto d = s->config.direction;
    const std::string refs_file = need(refs_path, "refs path");
    const auto refs = read_token_lists(refs_file, TokenRole::Reference, d);
    const auto srcs = read_token_lists(refs_file, TokenRole::Source, d);
    const auto gen = read_token_lists(need(gen_path, "generation predictions"), TokenRole::Hypothesis, d);
    const auto edit = read_token_lists(need(edit_path, "edit predictions"), TokenRole::Hypothesis, d);
    if (gen.size() != refs.size() || edit.size() != refs.size()) {
      throw Error(ErrorCode::LengthMismatch, "prediction files and references differ in length");
    }
    std::vector<HybridItem> items;
    for (std::size_t i = 0; i < refs.size(); ++i) items.push_back({gen[i], edit[i], refs[i], srcs[i], d.target});
    std::vector<int> grid = default_grid();
    if (grid_max >= 0) {
      grid.resize(static_cast<std::size_t>(grid_max) + 1);
      for (int t = 0; t <= grid_max; ++t) grid[static_cast<std::size_t>(t)] = t;
    }
    return emit(out, hybrid_to_json(hybrid_select(items, grid)));
  });
}

}  // extern "C"
