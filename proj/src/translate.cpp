#include "coedit/translate.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <thread>

#include "coedit/metrics.hpp"
#include "rng.hpp"

namespace coedit {

namespace {

constexpr std::pair<Mode, std::string_view> kModeNames[] = {
    {Mode::Copy, "copy"},         {Mode::CopyEdits, "copy_edits"},
    {Mode::EditsTranslation, "edits"}, {Mode::MetaEdits, "meta"},
    {Mode::Generation, "generation"},  {Mode::FewShot, "fewshot"},
};

Prediction failed(std::string_view raw, Status status, const Tokens& fallback, std::string detail) {
  Prediction p;
  p.raw = std::string(raw);
  p.status = status;
  p.hyp = fallback;
  p.fallback = true;
  p.detail = std::move(detail);
  return p;
}

Prediction ok(std::string_view raw, Tokens hyp) {
  Prediction p;
  p.raw = std::string(raw);
  p.hyp = std::move(hyp);
  return p;
}

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return static_cast<unsigned char>(c) <= ' '; });
}

// Length of the common run of a[..ia) and b[..ib) read backwards.
std::size_t common_suffix(const Tokens& a, std::size_t ia, const Tokens& b, std::size_t ib) {
  std::size_t k = 0;
  while (k < ia && k < ib && a[ia - 1 - k] == b[ib - 1 - k]) ++k;
  return k;
}

std::size_t common_prefix(const Tokens& a, std::size_t ia, const Tokens& b, std::size_t ib) {
  std::size_t k = 0;
  while (ia + k < a.size() && ib + k < b.size() && a[ia + k] == b[ib + k]) ++k;
  return k;
}

// Moves each concise source edit to the target position whose surrounding
// context agrees best with the source; a tie for the best position fails.
std::optional<Tokens> reanchor(const EditScript& concise, const Tokens& src_old, const Tokens& tgt_old) {
  EditScript placed{ScriptForm::Concise, {}};
  std::size_t cursor = 0;
  for (const auto& e : concise.edits) {
    const std::size_t p = *e.old_begin;
    const std::size_t len = e.old_span.size();
    if (len > tgt_old.size()) return std::nullopt;
    std::optional<std::size_t> best;
    std::size_t best_score = 0;
    bool tie = false;
    for (std::size_t q = cursor; q + len <= tgt_old.size(); ++q) {
      if (!std::equal(e.old_span.begin(), e.old_span.end(), tgt_old.begin() + static_cast<std::ptrdiff_t>(q))) {
        continue;
      }
      const std::size_t score =
          common_suffix(src_old, p, tgt_old, q) + common_prefix(src_old, p + len, tgt_old, q + len);
      if (!best || score > best_score) {
        best = q;
        best_score = score;
        tie = false;
      } else if (score == best_score) {
        tie = true;
      }
    }
    if (!best || tie) return std::nullopt;
    Edit moved = e;
    moved.old_begin = *best;
    placed.edits.push_back(std::move(moved));
    cursor = *best + len;
  }
  return replay(placed, tgt_old);
}

}  // namespace

std::string_view to_string(Mode mode) noexcept {
  for (const auto& [m, name] : kModeNames) {
    if (m == mode) return name;
  }
  return "copy";
}

std::optional<Mode> parse_mode(std::string_view text) {
  for (const auto& [m, name] : kModeNames) {
    if (name == text) return m;
  }
  if (text == "edits_translation" || text == "EditsTranslation") return Mode::EditsTranslation;
  if (text == "meta_edits" || text == "MetaEdits") return Mode::MetaEdits;
  if (text == "few_shot" || text == "FewShot") return Mode::FewShot;
  return std::nullopt;
}

bool uses_backend(Mode mode) noexcept { return mode != Mode::Copy && mode != Mode::CopyEdits; }

std::string_view to_string(Status status) noexcept {
  switch (status) {
    case Status::Ok: return "ok";
    case Status::ParseFailed: return "parse_failed";
    case Status::BackendError: return "backend_error";
  }
  return "ok";
}

std::optional<Status> parse_status(std::string_view text) {
  for (const Status s : {Status::Ok, Status::ParseFailed, Status::BackendError}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

ChangeView orient(const AlignedChangePair& pair, Direction direction) {
  ChangeView v;
  v.project = pair.project;
  const bool swap = pair.source.old_body.lang != direction.source;
  const MethodChange& s = swap ? pair.target : pair.source;
  const MethodChange& t = swap ? pair.source : pair.target;
  v.source_lang = s.old_body.lang;
  v.target_lang = t.old_body.lang;
  v.source_old = s.old_body.texts();
  v.source_new = s.new_body.texts();
  v.target_old = t.old_body.texts();
  v.target_new = t.new_body.texts();
  return v;
}

std::string encode_input(const EditScript& edits, const Tokens& target_old, const Tokens& source_new) {
  Tokens all = serialize_tokens(edits);
  all.emplace_back(kSepToken);
  for (const auto& t : target_old) all.push_back(escape_token(t));
  all.emplace_back(kSepToken);
  for (const auto& t : source_new) all.push_back(escape_token(t));
  return detokenize(all);
}

DecodedInput decode_input(std::string_view text) {
  const auto stream = split_script_text(text);
  std::vector<std::size_t> seps;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (stream[i].text == kSepToken) seps.push_back(i);
  }
  if (seps.size() != 2) {
    throw Error(ErrorCode::MalformedScript, "expected two <SEP> tokens, found " + std::to_string(seps.size()),
                text.size());
  }
  DecodedInput d;
  d.source_edits = parse_script_tokens({stream.begin(), stream.begin() + static_cast<std::ptrdiff_t>(seps[0])},
                                       ScriptForm::Unambiguous);
  for (std::size_t i = seps[0] + 1; i < seps[1]; ++i) d.target_old.push_back(unescape_token(stream[i].text));
  for (std::size_t i = seps[1] + 1; i < stream.size(); ++i) d.source_new.push_back(unescape_token(stream[i].text));
  return d;
}

EditScript source_edits(const ChangeView& change) {
  return disambiguate(diff(change.source_old, change.source_new), change.source_old);
}

std::vector<const ChangeView*> select_exemplars(const std::vector<ChangeView>& pool, const ChangeView& query,
                                                std::size_t k, std::uint64_t seed) {
  std::vector<const ChangeView*> candidates;
  for (const auto& c : pool) {
    if (c.project != query.project) continue;
    if (c.source_old == query.source_old && c.source_new == query.source_new && c.target_old == query.target_old &&
        c.target_new == query.target_new) {
      continue;
    }
    candidates.push_back(&c);
  }
  std::mt19937_64 rng(seed);
  const std::size_t take = std::min(k, candidates.size());
  for (std::size_t i = 0; i < take; ++i) {
    std::swap(candidates[i], candidates[i + detail::draw_index(rng, candidates.size() - i)]);
  }
  candidates.resize(take);
  return candidates;
}

PromptBundle build_input(const ChangeView& change, Mode mode, const std::vector<const ChangeView*>& exemplars) {
  PromptBundle b;
  b.mode = mode;
  b.direction = {change.source_lang, change.target_lang};
  if (mode != Mode::FewShot) {
    b.input_text = encode_input(source_edits(change), change.target_old, change.source_new);
    return b;
  }
  const std::string s = std::string(lang_label(change.source_lang)) + ": ";
  const std::string t = " " + std::string(lang_label(change.target_lang)) + ": ";
  for (const auto* ex : exemplars) {
    b.input_text += s + detokenize(ex->source_old) + " => " + detokenize(ex->source_new) + t +
                    detokenize(ex->target_old) + " => " + detokenize(ex->target_new) + "\n";
  }
  b.input_text += s + detokenize(change.source_old) + " => " + detokenize(change.source_new) + t +
                  detokenize(change.target_old) + " =>";
  return b;
}

Prediction parse_output(std::string_view raw, Mode mode, const Tokens& target_old, Lang target_lang) {
  if (blank(raw)) return failed(raw, Status::ParseFailed, target_old, "empty output");
  try {
    switch (mode) {
      case Mode::Copy:
      case Mode::CopyEdits:
        return failed(raw, Status::ParseFailed, target_old, "mode takes no model output");
      case Mode::EditsTranslation:
        return ok(raw, coedit::apply(parse_script(raw, ScriptForm::Unambiguous), target_old));
      case Mode::MetaEdits:
        return ok(raw, coedit::apply(parse_meta(raw).target, target_old));
      case Mode::Generation:
      case Mode::FewShot: {
        // A few-shot completion may run on into another exemplar line.
        const auto line = raw.substr(0, raw.find('\n'));
        if (blank(line)) return failed(raw, Status::ParseFailed, target_old, "empty output");
        return ok(raw, lex(line, target_lang).texts());
      }
    }
  } catch (const std::exception& e) {
    return failed(raw, Status::ParseFailed, target_old, e.what());
  }
  return failed(raw, Status::ParseFailed, target_old, "unknown mode");
}

Prediction baseline_copy(const ChangeView& change) { return ok("", change.target_old); }

Prediction baseline_copy_edits(const ChangeView& change) {
  try {
    const auto concise = diff(change.source_old, change.source_new);
    if (concise.empty()) return ok("", change.target_old);
    const auto unambiguous = disambiguate(concise, change.source_old);
    const std::string raw = serialize(unambiguous);
    try {
      return ok(raw, coedit::apply(unambiguous, change.target_old));
    } catch (const Error&) {
    }
    if (auto moved = reanchor(concise, change.source_old, change.target_old)) return ok(raw, std::move(*moved));
    return failed(raw, Status::ParseFailed, change.target_old, "source edits have no anchor in target");
  } catch (const std::exception& e) {
    return failed("", Status::ParseFailed, change.target_old, e.what());
  }
}

std::vector<int> default_grid() {
  std::vector<int> grid(601);
  std::iota(grid.begin(), grid.end(), 0);
  return grid;
}

std::size_t hybrid_length(const Tokens& target_old, Lang lang) {
  return subtoken_list(from_texts(target_old, lang)).size();
}

Tokens hybrid_pick(const HybridItem& item, int threshold) {
  const auto len = hybrid_length(item.target_old, item.target_lang);
  return threshold > 0 && len < static_cast<std::size_t>(threshold) ? item.pred_gen : item.pred_edit;
}

HybridResult hybrid_select(const std::vector<HybridItem>& validation, const std::vector<int>& grid) {
  if (validation.empty()) throw Error(ErrorCode::EmptyValidation, "no validation examples");
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "empty threshold grid");
  struct Row {
    std::size_t len;
    bool gen;
    bool edit;
  };
  std::vector<Row> rows;
  rows.reserve(validation.size());
  for (const auto& v : validation) {
    rows.push_back({hybrid_length(v.target_old, v.target_lang), v.pred_gen == v.ref, v.pred_edit == v.ref});
  }
  std::vector<int> sorted = grid;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  HybridResult result;
  bool first = true;
  for (const int t : sorted) {
    std::size_t hits = 0;
    for (const auto& r : rows) {
      const bool use_gen = t > 0 && r.len < static_cast<std::size_t>(t);
      hits += (use_gen ? r.gen : r.edit) ? 1 : 0;
    }
    const double score = 100.0 * static_cast<double>(hits) / static_cast<double>(rows.size());
    result.curve.emplace_back(t, score);
    if (first || score > result.xmatch) {
      result.threshold = t;
      result.xmatch = score;
      first = false;
    }
  }
  return result;
}

BatchResult run_batch(const std::vector<ChangeView>& dataset, CompletionBackend* backend,
                      const BatchOptions& options, const std::vector<ChangeView>& exemplar_pool) {
  BatchResult result;
  result.records.resize(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    result.records[i].id = i;
    result.records[i].mode = options.mode;
  }
  if (!uses_backend(options.mode)) {
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      result.records[i].prediction =
          options.mode == Mode::Copy ? baseline_copy(dataset[i]) : baseline_copy_edits(dataset[i]);
    }
    return result;
  }
  if (!backend) throw Error(ErrorCode::InvalidArgument, "mode needs a completion backend");

  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::atomic<std::size_t> calls{0};
  std::mutex abort_mutex;
  std::vector<char> done(dataset.size(), 0);

  const auto work = [&] {
    for (;;) {
      if (abort.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= dataset.size()) return;
      const auto& change = dataset[i];
      std::vector<const ChangeView*> exemplars;
      if (options.mode == Mode::FewShot) {
        exemplars = select_exemplars(exemplar_pool, change, options.fewshot_k, options.seed + i);
      }
      const auto bundle = build_input(change, options.mode, exemplars);

      std::vector<std::string> outputs;
      std::string error;
      bool transient_exhausted = false;
      auto delay = options.backoff;
      for (int attempt = 1;; ++attempt) {
        try {
          ++calls;
          outputs = backend->complete(bundle.input_text, options.samples, options.max_tokens);
          error.clear();
          break;
        } catch (const BackendFailure& f) {
          error = f.what();
          if (!f.transient()) break;
          if (attempt >= options.attempts) {
            transient_exhausted = true;
            break;
          }
        } catch (const std::exception& e) {
          error = e.what();
          if (attempt >= options.attempts) {
            transient_exhausted = true;
            break;
          }
        }
        std::this_thread::sleep_for(delay);
        delay *= 2;
      }

      Prediction p;
      if (!error.empty()) {
        p = failed("", Status::BackendError, change.target_old, error);
        if (transient_exhausted) {
          std::lock_guard lock(abort_mutex);
          if (!abort.exchange(true)) result.abort_reason = error;
        }
      } else if (outputs.empty()) {
        p = failed("", Status::ParseFailed, change.target_old, "backend returned no outputs");
      } else {
        // First ranked output that parses wins.
        p = parse_output(outputs.front(), options.mode, change.target_old, change.target_lang);
        for (std::size_t k = 1; k < outputs.size() && p.status != Status::Ok; ++k) {
          auto alt = parse_output(outputs[k], options.mode, change.target_old, change.target_lang);
          if (alt.status == Status::Ok) p = std::move(alt);
        }
      }
      result.records[i].prediction = std::move(p);
      done[i] = 1;
    }
  };

  const int workers = std::max(1, std::min<int>(options.parallelism, static_cast<int>(dataset.size())));
  std::vector<std::thread> threads;
  for (int w = 1; w < workers; ++w) threads.emplace_back(work);
  work();
  for (auto& t : threads) t.join();

  result.aborted = abort.load();
  result.backend_calls = calls.load();
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (!done[i]) {
      result.records[i].prediction =
          failed("", Status::BackendError, dataset[i].target_old, "not attempted: " + result.abort_reason);
    }
  }
  return result;
}

}  // namespace coedit
