#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coedit/edit_script.hpp"
#include "coedit/error.hpp"
#include "coedit/miner.hpp"
#include "coedit/token_model.hpp"

namespace coedit {

enum class Mode { Copy, CopyEdits, EditsTranslation, MetaEdits, Generation, FewShot };

// "copy", "copy_edits", "edits", "meta", "generation", "fewshot"
std::string_view to_string(Mode mode) noexcept;
std::optional<Mode> parse_mode(std::string_view text);
bool uses_backend(Mode mode) noexcept;

struct Direction {
  Lang source = Lang::Java;
  Lang target = Lang::CSharp;
};

// One change seen from the translation direction: source is the language
// the edit is taken from.
struct ChangeView {
  std::string project;
  Lang source_lang = Lang::Java;
  Lang target_lang = Lang::CSharp;
  Tokens source_old;
  Tokens source_new;
  Tokens target_old;
  Tokens target_new;
};

// Swaps sides when the pair was mined in the other direction.
ChangeView orient(const AlignedChangePair& pair, Direction direction);

struct PromptBundle {
  Mode mode = Mode::EditsTranslation;
  std::string input_text;
  Direction direction;
};

// Source unambiguous edits, target old and source new, <SEP> separated. All
// code tokens are escaped so decode_input recovers the triple exactly.
std::string encode_input(const EditScript& source_edits, const Tokens& target_old,
                         const Tokens& source_new);

struct DecodedInput {
  EditScript source_edits;
  Tokens target_old;
  Tokens source_new;
};
DecodedInput decode_input(std::string_view text);

// Unambiguous edits of the source side.
EditScript source_edits(const ChangeView& change);

// Few-shot exemplars: `k` other changes from the same project, chosen with a
// generator seeded by `seed`.
std::vector<const ChangeView*> select_exemplars(const std::vector<ChangeView>& pool,
                                                const ChangeView& query, std::size_t k,
                                                std::uint64_t seed);

PromptBundle build_input(const ChangeView& change, Mode mode,
                         const std::vector<const ChangeView*>& exemplars = {});

enum class Status { Ok, ParseFailed, BackendError };
std::string_view to_string(Status status) noexcept;
std::optional<Status> parse_status(std::string_view text);

struct Prediction {
  std::string raw;
  Status status = Status::Ok;
  Tokens hyp;            // final tokens; target_old when falling back
  bool fallback = false;
  std::string detail;    // error text for non-ok statuses
};

// Never throws. Failures fall back to a copy of target_old.
Prediction parse_output(std::string_view raw, Mode mode, const Tokens& target_old, Lang target_lang);

Prediction baseline_copy(const ChangeView& change);
Prediction baseline_copy_edits(const ChangeView& change);

struct HybridItem {
  Tokens pred_gen;
  Tokens pred_edit;
  Tokens ref;
  Tokens target_old;
  Lang target_lang = Lang::CSharp;
};

struct HybridResult {
  int threshold = 0;
  double xmatch = 0;
  std::vector<std::pair<int, double>> curve;  // (t, validation xMatch)
};

std::vector<int> default_grid();  // 0..600
// Subtoken count of target_old; generation is used when it is below t.
std::size_t hybrid_length(const Tokens& target_old, Lang lang);
Tokens hybrid_pick(const HybridItem& item, int threshold);
// Smallest t wins ties. Throws Error(EmptyValidation) or
// Error(InvalidArgument) for an empty grid.
HybridResult hybrid_select(const std::vector<HybridItem>& validation,
                           const std::vector<int>& grid = default_grid());

// --- backends ----------------------------------------------------------------

// Raised by backends. Transient failures (5xx, 429, connection problems)
// are retried; others fail only the current example.
class BackendFailure : public Error {
 public:
  BackendFailure(const std::string& message, bool transient)
      : Error(ErrorCode::BackendError, message), transient_(transient) {}
  bool transient() const noexcept { return transient_; }

 private:
  bool transient_;
};

class CompletionBackend {
 public:
  virtual ~CompletionBackend() = default;
  // Up to `n` ranked completions. Must be safe to call from several threads.
  virtual std::vector<std::string> complete(const std::string& input, int n, int max_tokens) = 0;
};

struct BatchOptions {
  Mode mode = Mode::EditsTranslation;
  Direction direction;
  int samples = 20;
  int max_tokens = 512;
  int parallelism = 4;
  int attempts = 3;
  std::chrono::milliseconds backoff{200};  // doubled after each failed attempt
  std::size_t fewshot_k = 2;
  std::uint64_t seed = 0;
};

struct PredictionRecord {
  std::size_t id = 0;
  Mode mode = Mode::Copy;
  Prediction prediction;
};

struct BatchResult {
  std::vector<PredictionRecord> records;  // one per input, in input order
  bool aborted = false;
  std::string abort_reason;
  std::size_t backend_calls = 0;
};

// `backend` may be null for Copy/CopyEdits. `exemplar_pool` feeds FewShot.
// After a transient failure survives all attempts, the batch stops: the
// remaining examples are marked backend_error with the copy fallback and
// `aborted` is set.
BatchResult run_batch(const std::vector<ChangeView>& dataset, CompletionBackend* backend,
                      const BatchOptions& options,
                      const std::vector<ChangeView>& exemplar_pool = {});

struct BackendConfig {
  std::string endpoint;  // http(s)://host[:port]/path
  std::string token;     // bearer token, normally from COEDIT_BACKEND_TOKEN
  int samples = 20;
  int max_tokens = 512;
  int parallelism = 4;
  double timeout_seconds = 60;
};

// POSTs {"input", "n", "max_tokens"} and reads {"outputs": [...]}.
class HttpBackend : public CompletionBackend {
 public:
  explicit HttpBackend(BackendConfig config);
  std::vector<std::string> complete(const std::string& input, int n, int max_tokens) override;

 private:
  BackendConfig config_;
  std::string scheme_host_;
  std::string path_;
};

}  // namespace coedit
