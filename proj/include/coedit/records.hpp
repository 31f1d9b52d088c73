#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "coedit/metrics.hpp"
#include "coedit/miner.hpp"
#include "coedit/translate.hpp"

// JSON Lines I/O for mined pairs, predictions and reports. Output is
// byte-stable: keys in fixed order, one record per line.
namespace coedit {

std::string pair_to_json(const AlignedChangePair& pair);
// Throws Error(InvalidArgument) on a malformed record.
AlignedChangePair pair_from_json(std::string_view line);

std::string prediction_to_json(const PredictionRecord& record);
PredictionRecord prediction_from_json(std::string_view line);

std::string report_to_json(const MetricReport& report, const std::string& mode);
// Per-example CSV: id,target_old_len,xmatch,bleu,codebleu_reduced,sari,gleu
std::string report_to_csv(const MetricReport& report, const std::vector<std::size_t>& lengths);
std::string bootstrap_to_json(const BootstrapResult& result, std::size_t resamples, double level);
std::string stats_to_json(const std::vector<SplitStats>& stats);
std::string hybrid_to_json(const HybridResult& result);

// Non-empty lines of a file. Throws Error(Io).
std::vector<std::string> read_lines(const std::string& path);
void write_text(const std::string& path, const std::string& text);

std::vector<AlignedChangePair> read_pairs(const std::string& path);
void write_pairs(const std::string& path, const std::vector<AlignedChangePair>& pairs);
std::vector<PredictionRecord> read_predictions(const std::string& path);
void write_predictions(const std::string& path, const std::vector<PredictionRecord>& records);

enum class TokenRole { Reference, Source, Hypothesis };

// Token lists from a JSONL file whose lines are pair records (target side
// new/old for Reference/Source), prediction records (hyp_tokens) or
// {"tokens": [...]} objects.
std::vector<Tokens> read_token_lists(const std::string& path, TokenRole role, Direction direction);

}  // namespace coedit
