#include "coedit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "coedit/error.hpp"

namespace coedit {

namespace {

constexpr std::size_t kMaxOrder = 4;

using Counter = std::map<Tokens, double>;

Counter ngrams(const Tokens& t, std::size_t n) {
  Counter c;
  for (std::size_t i = 0; i + n <= t.size(); ++i) {
    c[Tokens(t.begin() + static_cast<std::ptrdiff_t>(i),
             t.begin() + static_cast<std::ptrdiff_t>(i + n))] += 1;
  }
  return c;
}

double get(const Counter& c, const Tokens& k) {
  const auto it = c.find(k);
  return it == c.end() ? 0.0 : it->second;
}

// Per-order numerators/denominators plus lengths; summable over a corpus.
struct BleuCounts {
  double match[kMaxOrder] = {};
  double total[kMaxOrder] = {};
  double hyp_len = 0;
  double ref_len = 0;

  BleuCounts& operator+=(const BleuCounts& o) {
    for (std::size_t n = 0; n < kMaxOrder; ++n) {
      match[n] += o.match[n];
      total[n] += o.total[n];
    }
    hyp_len += o.hyp_len;
    ref_len += o.ref_len;
    return *this;
  }
};

double brevity(double c, double r) {
  if (c <= 0) return 0;
  return c > r ? 1.0 : std::exp(1.0 - r / c);
}

double combine(const BleuCounts& k) {
  if (k.hyp_len <= 0 || k.total[0] <= 0 || k.match[0] <= 0) return 0;
  double log_sum = std::log(k.match[0] / k.total[0]);
  for (std::size_t n = 1; n < kMaxOrder; ++n) {
    log_sum += std::log((k.match[n] + 1) / (k.total[n] + 1));
  }
  return 100.0 * brevity(k.hyp_len, k.ref_len) * std::exp(log_sum / kMaxOrder);
}

// `weight` applies to unigrams only.
template <typename Weight>
BleuCounts bleu_counts(const Tokens& ref, const Tokens& hyp, Weight weight) {
  BleuCounts k;
  k.hyp_len = static_cast<double>(hyp.size());
  k.ref_len = static_cast<double>(ref.size());
  for (std::size_t n = 1; n <= kMaxOrder; ++n) {
    const Counter h = ngrams(hyp, n);
    const Counter r = ngrams(ref, n);
    for (const auto& [g, count] : h) {
      const double w = n == 1 ? weight(g.front()) : 1.0;
      k.match[n - 1] += w * std::min(count, get(r, g));
      k.total[n - 1] += w * count;
    }
  }
  return k;
}

BleuCounts plain_counts(const Tokens& ref, const Tokens& hyp) {
  return bleu_counts(ref, hyp, [](const std::string&) { return 1.0; });
}

BleuCounts weighted_counts(const Tokens& ref, const Tokens& hyp,
                           const std::set<std::string, std::less<>>& keywords) {
  return bleu_counts(ref, hyp, [&](const std::string& t) {
    return keywords.count(t) ? kKeywordWeight : 1.0;
  });
}

double f1(double p, double r) { return p + r > 0 ? 2 * p * r / (p + r) : 0.0; }

// Mean over the orders where a component had anything to score; 1 if none.
struct Average {
  double sum = 0;
  int count = 0;
  void add(double v) {
    sum += v;
    ++count;
  }
  double value() const { return count ? sum / count : 1.0; }
};

Counter intersect(const Counter& a, const Counter& b) {
  Counter out;
  for (const auto& [g, v] : a) {
    const double m = std::min(v, get(b, g));
    if (m > 0) out[g] = m;
  }
  return out;
}

Counter subtract(const Counter& a, const Counter& b) {
  Counter out;
  for (const auto& [g, v] : a) {
    const double d = v - get(b, g);
    if (d > 0) out[g] = d;
  }
  return out;
}

}  // namespace

double xmatch(const Tokens& ref, const Tokens& hyp) { return ref == hyp ? 100.0 : 0.0; }

double bleu(const Tokens& ref, const Tokens& hyp) { return combine(plain_counts(ref, hyp)); }

double corpus_bleu(const std::vector<Tokens>& refs, const std::vector<Tokens>& hyps) {
  if (refs.size() != hyps.size()) throw Error(ErrorCode::LengthMismatch, "refs and hyps differ in length");
  BleuCounts total;
  for (std::size_t i = 0; i < refs.size(); ++i) total += plain_counts(refs[i], hyps[i]);
  return combine(total);
}

double codebleu_reduced(const Tokens& ref, const Tokens& hyp,
                        const std::set<std::string, std::less<>>& keywords) {
  return 0.5 * combine(plain_counts(ref, hyp)) + 0.5 * combine(weighted_counts(ref, hyp, keywords));
}

double corpus_codebleu_reduced(const std::vector<Tokens>& refs, const std::vector<Tokens>& hyps,
                               const std::set<std::string, std::less<>>& keywords) {
  if (refs.size() != hyps.size()) throw Error(ErrorCode::LengthMismatch, "refs and hyps differ in length");
  BleuCounts plain;
  BleuCounts weighted;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    plain += plain_counts(refs[i], hyps[i]);
    weighted += weighted_counts(refs[i], hyps[i], keywords);
  }
  return 0.5 * combine(plain) + 0.5 * combine(weighted);
}

double sari(const Tokens& src, const Tokens& ref, const Tokens& hyp) {
  Average keep;
  Average del;
  Average add;
  for (std::size_t n = 1; n <= kMaxOrder; ++n) {
    const Counter s = ngrams(src, n);
    const Counter r = ngrams(ref, n);
    const Counter c = ngrams(hyp, n);

    // keep: fractional credit per n-gram kept by both hyp and ref
    const Counter keep_sys = intersect(s, c);
    const Counter keep_ref = intersect(s, r);
    if (!keep_sys.empty() || !keep_ref.empty()) {
      const Counter good = intersect(keep_sys, r);
      double p = 0;
      double rc = 1;
      if (!keep_sys.empty()) {
        double acc = 0;
        for (const auto& [g, v] : keep_sys) acc += get(good, g) / v;
        p = acc / static_cast<double>(keep_sys.size());
      }
      if (!keep_ref.empty()) {
        double acc = 0;
        for (const auto& [g, v] : keep_ref) acc += get(good, g) / v;
        rc = acc / static_cast<double>(keep_ref.size());
      }
      keep.add(f1(p, rc));
    }

    // delete: precision only
    const Counter del_sys = subtract(s, c);
    const Counter del_ref = subtract(s, r);
    if (!del_sys.empty() || !del_ref.empty()) {
      double p = 0;
      if (!del_sys.empty()) {
        double acc = 0;
        for (const auto& [g, v] : del_sys) acc += std::min(v, get(del_ref, g)) / v;
        p = acc / static_cast<double>(del_sys.size());
      }
      del.add(p);
    }

    // add: set based
    std::set<Tokens> add_sys;
    std::set<Tokens> add_ref;
    for (const auto& [g, v] : c) {
      if (!s.count(g)) add_sys.insert(g);
    }
    for (const auto& [g, v] : r) {
      if (!s.count(g)) add_ref.insert(g);
    }
    if (!add_sys.empty() || !add_ref.empty()) {
      double good = 0;
      for (const auto& g : add_sys) good += add_ref.count(g) ? 1 : 0;
      const double p = add_sys.empty() ? 0 : good / static_cast<double>(add_sys.size());
      const double rc = add_ref.empty() ? 1 : good / static_cast<double>(add_ref.size());
      add.add(f1(p, rc));
    }
  }
  return 100.0 * (keep.value() + del.value() + add.value()) / 3.0;
}

double gleu(const Tokens& src, const Tokens& ref, const Tokens& hyp) {
  BleuCounts k;
  k.hyp_len = static_cast<double>(hyp.size());
  k.ref_len = static_cast<double>(ref.size());
  for (std::size_t n = 1; n <= kMaxOrder; ++n) {
    const Counter h = ngrams(hyp, n);
    const Counter r = ngrams(ref, n);
    const Counter s = ngrams(src, n);
    double matched = 0;
    double penalty = 0;
    double total = 0;
    for (const auto& [g, count] : h) {
      const double rc = get(r, g);
      matched += std::min(count, rc);
      penalty += std::max(0.0, std::min(count, get(s, g)) - rc);
      total += count;
    }
    k.match[n - 1] = std::max(0.0, matched - penalty);
    k.total[n - 1] = total;
  }
  return combine(k);
}

MetricReport evaluate(const std::vector<Tokens>& refs, const std::vector<Tokens>& hyps,
                      const std::vector<Tokens>& srcs,
                      const std::set<std::string, std::less<>>& keywords) {
  if (refs.size() != hyps.size() || (!srcs.empty() && srcs.size() != refs.size())) {
    throw Error(ErrorCode::LengthMismatch, "reference, hypothesis and source counts differ");
  }
  if (refs.empty()) throw Error(ErrorCode::InvalidArgument, "nothing to evaluate");
  MetricReport report;
  report.n = refs.size();
  report.has_src = !srcs.empty();
  report.examples.reserve(refs.size());
  double xm = 0, sent = 0, sr = 0, gl = 0;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    ExampleScores e;
    e.xmatch = xmatch(refs[i], hyps[i]);
    e.bleu = bleu(refs[i], hyps[i]);
    e.codebleu_reduced = codebleu_reduced(refs[i], hyps[i], keywords);
    if (report.has_src) {
      e.sari = sari(srcs[i], refs[i], hyps[i]);
      e.gleu = gleu(srcs[i], refs[i], hyps[i]);
    }
    xm += e.xmatch;
    sent += e.bleu;
    sr += e.sari;
    gl += e.gleu;
    report.examples.push_back(e);
  }
  const double n = static_cast<double>(report.n);
  report.xmatch = xm / n;
  report.bleu_sent_avg = sent / n;
  report.sari = sr / n;
  report.gleu = gl / n;
  report.bleu_corpus = corpus_bleu(refs, hyps);
  report.codebleu_reduced = corpus_codebleu_reduced(refs, hyps, keywords);
  return report;
}

}  // namespace coedit
