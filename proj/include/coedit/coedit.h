/* C interface to the coedit library.
 *
 * Every call that can fail returns a coedit_status. On failure the session
 * keeps a message (coedit_session_last_error) and, for script parse errors,
 * the byte offset of the problem. Results come back in coedit_buffer objects
 * owned by the caller.
 *
 * Token lists cross the boundary as JSON arrays of strings. A session is not
 * safe for concurrent use; create one per thread.
 */
#ifndef COEDIT_COEDIT_H
#define COEDIT_COEDIT_H

#include <stddef.h>

#if defined(COEDIT_BUILDING_LIBRARY)
#define COEDIT_API __attribute__((visibility("default")))
#else
#define COEDIT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum coedit_status {
  COEDIT_OK = 0,
  COEDIT_E_INVALID_ARGUMENT = 1,
  COEDIT_E_IO = 2,
  COEDIT_E_UNTERMINATED_LITERAL = 3,
  COEDIT_E_MALFORMED_SCRIPT = 4,
  COEDIT_E_ANCHOR_NOT_FOUND = 5,
  COEDIT_E_AMBIGUOUS_ANCHOR = 6,
  COEDIT_E_OVERLAPPING_EDITS = 7,
  COEDIT_E_NO_UNIQUE_ANCHOR = 8,
  COEDIT_E_REPO_UNREADABLE = 9,
  COEDIT_E_EMPTY_PROJECT = 10,
  COEDIT_E_EMPTY_VALIDATION = 11,
  COEDIT_E_LENGTH_MISMATCH = 12,
  COEDIT_E_BACKEND = 13,
  COEDIT_E_BACKEND_UNREACHABLE = 14,
  COEDIT_E_INTERNAL = 15
} coedit_status;

typedef struct coedit_session coedit_session;
typedef struct coedit_buffer coedit_buffer;

COEDIT_API const char* coedit_version(void);
/* "InvalidArgument", "MalformedScript", ... */
COEDIT_API const char* coedit_status_name(coedit_status status);

/* --- session ------------------------------------------------------------- */

COEDIT_API coedit_status coedit_session_new(coedit_session** out);
COEDIT_API void coedit_session_free(coedit_session* session);
/* JSON config file; keys as in the CLI's --config. */
COEDIT_API coedit_status coedit_session_load_config(coedit_session* session, const char* path);
/* e.g. ("direction", "cs2java"), ("jaccard_min", "0.6"), ("seed", "7"). */
COEDIT_API coedit_status coedit_session_set_option(coedit_session* session, const char* key,
                                                   const char* value);
/* Empty string when the last call succeeded. Valid until the next call. */
COEDIT_API const char* coedit_session_last_error(const coedit_session* session);
/* Byte offset attached to the last error, or -1. */
COEDIT_API long long coedit_session_last_error_offset(const coedit_session* session);

/* --- buffers ------------------------------------------------------------- */

/* NUL-terminated; size excludes the terminator. */
COEDIT_API const char* coedit_buffer_data(const coedit_buffer* buffer);
COEDIT_API size_t coedit_buffer_size(const coedit_buffer* buffer);
COEDIT_API void coedit_buffer_free(coedit_buffer* buffer);

/* --- tokens -------------------------------------------------------------- */

/* lang: "java"/"a" or "cs"/"b". Output: JSON array of tokens (or of
 * subtokens when `subtokens` is non-zero). */
COEDIT_API coedit_status coedit_tokenize(coedit_session* session, const char* source, size_t length,
                                         const char* lang, int subtokens, coedit_buffer** out);

/* --- edit scripts -------------------------------------------------------- */

/* Concise script text. */
COEDIT_API coedit_status coedit_diff(coedit_session* session, const char* old_tokens_json,
                                     const char* new_tokens_json, coedit_buffer** out);
/* Unambiguous script text for the change old -> new. */
COEDIT_API coedit_status coedit_disambiguate(coedit_session* session, const char* old_tokens_json,
                                             const char* new_tokens_json, coedit_buffer** out);
/* Applies an unambiguous script; output is a JSON token array. */
COEDIT_API coedit_status coedit_apply(coedit_session* session, const char* script,
                                      const char* old_tokens_json, coedit_buffer** out);
/* Validates a script and returns its canonical text. form: "concise",
 * "unambiguous" or "meta". */
COEDIT_API coedit_status coedit_parse_script(coedit_session* session, const char* script,
                                             const char* form, coedit_buffer** out);
/* Meta edit text "[plan] <SEP> [target]" for two unambiguous scripts. */
COEDIT_API coedit_status coedit_make_meta(coedit_session* session, const char* source_script,
                                          const char* target_script, coedit_buffer** out);

/* --- mining -------------------------------------------------------------- */

/* Pairs as JSON lines. Languages follow the session direction. */
COEDIT_API coedit_status coedit_mine(coedit_session* session, const char* src_repo,
                                     const char* tgt_repo, const char* project, coedit_buffer** out);
/* Writes train/valid/test.jsonl into out_dir; returns a JSON count summary. */
COEDIT_API coedit_status coedit_split(coedit_session* session, const char* pairs_path,
                                      const char* out_dir, coedit_buffer** out);
/* Statistics of a split directory as JSON. */
COEDIT_API coedit_status coedit_stats(coedit_session* session, const char* dataset_dir,
                                      coedit_buffer** out);

/* --- translation --------------------------------------------------------- */

/* mode: copy, copy_edits, edits, meta, generation, fewshot. `pair_json` is
 * one pair record; `exemplars_path` (JSONL, may be NULL) feeds fewshot. */
COEDIT_API coedit_status coedit_prompt(coedit_session* session, const char* pair_json, const char* mode,
                                       const char* exemplars_path, coedit_buffer** out);
/* Parses one backend output against a pair record; returns a prediction
 * record (JSON). Never fails on bad output, only on bad arguments. */
COEDIT_API coedit_status coedit_parse_output(coedit_session* session, const char* raw, const char* mode,
                                             const char* pair_json, coedit_buffer** out);
/* Runs a mode over a pairs file, writes predictions JSONL to
 * predictions_path and returns the metric report. Backend modes use the
 * session's backend settings. COEDIT_E_BACKEND_UNREACHABLE still writes the
 * partial predictions and fills `out`. */
COEDIT_API coedit_status coedit_translate(coedit_session* session, const char* pairs_path, const char* mode,
                                          const char* exemplars_path, const char* predictions_path,
                                          coedit_buffer** out);

/* --- evaluation ---------------------------------------------------------- */

/* Metric report JSON. src_path and csv_path may be NULL. */
COEDIT_API coedit_status coedit_eval(coedit_session* session, const char* refs_path, const char* hyps_path,
                                     const char* src_path, const char* csv_path, coedit_buffer** out);
/* Paired bootstrap on per-example scores of two hypothesis files. metric:
 * xmatch, bleu, codebleu_reduced, sari or gleu. */
COEDIT_API coedit_status coedit_compare(coedit_session* session, const char* refs_path,
                                        const char* hyps_a_path, const char* hyps_b_path,
                                        const char* src_path, const char* metric, coedit_buffer** out);
/* Threshold search over validation predictions of a generation and an edit
 * model. `grid_max` < 0 uses the default 0..600. */
COEDIT_API coedit_status coedit_hybrid_select(coedit_session* session, const char* refs_path,
                                              const char* gen_path, const char* edit_path, int grid_max,
                                              coedit_buffer** out);

#ifdef __cplusplus
}
#endif

#endif /* COEDIT_COEDIT_H */
