#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "coedit/token_model.hpp"

namespace coedit {

struct MethodIdentity {
  std::string file_path;
  std::string class_name;  // nested classes joined with '.'
  std::string signature;   // name(paramType,...)

  // "file#class#signature"
  std::string canonical() const;
  friend auto operator<=>(const MethodIdentity&, const MethodIdentity&) = default;
};

struct MethodDef {
  MethodIdentity identity;
  TokenSequence tokens;  // annotations/attributes through the closing brace or ';'
};

// Brace-balanced scan of a lexed source file for method and constructor
// declarations that have a body.
std::vector<MethodDef> scan_methods(const TokenSequence& file, const std::string& path);

struct MethodChange {
  MethodIdentity identity;
  TokenSequence old_body;
  TokenSequence new_body;
  std::string commit_id;
  std::int64_t commit_time = 0;  // seconds since the epoch, UTC
};

struct ExtractReport {
  std::vector<MethodChange> changes;
  std::vector<std::string> skipped;  // "commit:path: reason"
};

// One change per (commit, modified method) whose token sequence changed.
// Throws Error(RepoUnreadable).
ExtractReport extract_changes(const std::string& repo_path, Lang lang);

// Lowercased subtokens of file stem, class and signature, space separated.
std::string normalized_identifier(const MethodIdentity& id);
// 1 - levenshtein(a, b) / max(|a|, |b|); 1 for two empty strings.
double levenshtein_ratio(std::string_view a, std::string_view b);

std::vector<std::pair<MethodIdentity, MethodIdentity>> pair_methods(
    const std::vector<MethodIdentity>& src, const std::vector<MethodIdentity>& tgt,
    double cutoff = 0.8);

double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b);

struct SimilarityComponents {
  double added_subtokens = 0;
  double removed_subtokens = 0;
  double added_lines = 0;
  double removed_lines = 0;
  // Components where neither change adds (or removes) anything are left out
  // of the mean.
  bool active[4] = {false, false, false, false};

  double mean() const;
};

SimilarityComponents change_similarity(const MethodChange& src, const MethodChange& tgt);

struct AlignedChangePair {
  std::string project;
  MethodChange source;
  MethodChange target;
  double similarity = 0;
  SimilarityComponents components;
};

struct AlignOptions {
  double window_days = 90;
  double jaccard_min = 0.5;
  double identifier_cutoff = 0.8;
};

inline constexpr std::int64_t kSecondsPerDay = 86400;

// Candidates need target_time in [source_time, source_time + window] and
// similarity >= jaccard_min. Each change is used at most once; the best
// candidates win (similarity, then smaller time gap, then commit ids).
std::vector<AlignedChangePair> align_changes(const std::vector<MethodChange>& src,
                                             const std::vector<MethodChange>& tgt,
                                             const AlignOptions& options,
                                             const std::string& project);

struct MineResult {
  std::vector<AlignedChangePair> pairs;
  std::vector<std::string> skipped;
  std::size_t src_changes = 0;
  std::size_t tgt_changes = 0;
};

// Both repositories are read concurrently.
MineResult mine(const std::string& src_repo, Lang src_lang, const std::string& tgt_repo,
                Lang tgt_lang, const AlignOptions& options, const std::string& project);

struct DatasetSplit {
  std::vector<AlignedChangePair> train;
  std::vector<AlignedChangePair> valid;
  std::vector<AlignedChangePair> test;
};

// Per project, chronological by target commit time; floor(train*n),
// floor(valid*n), remainder. Throws Error(EmptyProject) on empty input and
// Error(InvalidArgument) on bad ratios.
DatasetSplit split_time_segmented(std::vector<AlignedChangePair> pairs, double train = 0.7,
                                  double valid = 0.1);

struct SideStats {
  std::size_t count = 0;
  double avg_old_len = 0;
  double avg_new_len = 0;
  double avg_edits = 0;
  double avg_added = 0;
  double avg_deleted = 0;
};

struct SplitStats {
  std::string split;
  Lang src_lang = Lang::Java;
  Lang tgt_lang = Lang::CSharp;
  SideStats source;
  SideStats target;
};

SideStats side_stats(const std::vector<std::pair<Tokens, Tokens>>& old_new);
std::vector<SplitStats> dataset_stats(const DatasetSplit& split);

}  // namespace coedit
