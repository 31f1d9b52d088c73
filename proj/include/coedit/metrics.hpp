#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "coedit/token_model.hpp"

namespace coedit {

// All scores are on a 0..100 scale.

double xmatch(const Tokens& ref, const Tokens& hyp);

// Sentence BLEU, n = 1..4, uniform weights. Unigram precision is unsmoothed;
// higher orders use (matches + 1) / (total + 1). Brevity penalty is
// exp(1 - r/c) when c <= r; an empty hypothesis scores 0.
double bleu(const Tokens& ref, const Tokens& hyp);
// Same formula over corpus-summed counts and lengths.
double corpus_bleu(const std::vector<Tokens>& refs, const std::vector<Tokens>& hyps);

// Keep-F1, delete-precision and add-F1 averaged over n = 1..4.
double sari(const Tokens& src, const Tokens& ref, const Tokens& hyp);

// BLEU-like precision where hypothesis n-grams shared with the source but
// missing from the reference are subtracted.
double gleu(const Tokens& src, const Tokens& ref, const Tokens& hyp);

// 0.5 * BLEU + 0.5 * keyword-weighted BLEU (keywords weigh 5 in the unigram
// precision). No syntax or data-flow terms.
double codebleu_reduced(const Tokens& ref, const Tokens& hyp,
                        const std::set<std::string, std::less<>>& keywords);
double corpus_codebleu_reduced(const std::vector<Tokens>& refs, const std::vector<Tokens>& hyps,
                               const std::set<std::string, std::less<>>& keywords);

inline constexpr double kKeywordWeight = 5.0;

struct ExampleScores {
  double xmatch = 0;
  double bleu = 0;
  double codebleu_reduced = 0;
  double sari = 0;
  double gleu = 0;
};

struct MetricReport {
  std::size_t n = 0;
  double xmatch = 0;
  double bleu_corpus = 0;
  double bleu_sent_avg = 0;
  double codebleu_reduced = 0;
  double sari = 0;  // only meaningful when sources were given
  double gleu = 0;
  bool has_src = false;
  std::vector<ExampleScores> examples;
};

// `srcs` may be empty; otherwise all three lists must have equal length
// (Error(LengthMismatch)). An empty corpus is Error(InvalidArgument).
MetricReport evaluate(const std::vector<Tokens>& refs, const std::vector<Tokens>& hyps,
                      const std::vector<Tokens>& srcs,
                      const std::set<std::string, std::less<>>& keywords);

struct BootstrapResult {
  bool significant = false;
  double p_estimate = 1.0;
  double observed_diff = 0;  // mean(a) - mean(b)
  // Fraction of resamples whose mean difference has the observed sign.
  double consistent_fraction = 0;
  std::size_t draws = 0;
  bool exhaustive = false;
  std::uint64_t seed = 0;
};

// Paired bootstrap over example indices. When n^n <= resamples every index
// tuple is enumerated once instead of sampling. Throws Error(LengthMismatch)
// or Error(InvalidArgument) for fewer than 2 examples.
BootstrapResult bootstrap_test(const std::vector<double>& a, const std::vector<double>& b,
                               std::size_t resamples = 10000, double level = 0.95,
                               std::uint64_t seed = 0);

}  // namespace coedit
