#include "coedit/miner.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "coedit/edit_script.hpp"
#include "coedit/error.hpp"
#include "process.hpp"

namespace coedit {

namespace {

std::string git_checked(const std::string& repo, std::vector<std::string> args) {
  args.insert(args.begin(), {"git", "-c", "core.quotePath=false", "-C", repo});
  const auto r = detail::run_capture(args);
  if (r.exit_code != 0) {
    throw Error(ErrorCode::RepoUnreadable, repo + ": git " + args[5] + " failed: " + r.err);
  }
  return r.out;
}

bool has_extension(const std::string& path, Lang lang) {
  const std::string_view ext = lang == Lang::Java ? ".java" : ".cs";
  return path.size() > ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0;
}

struct CommitInfo {
  std::string id;
  std::string parent;
  std::int64_t time = 0;
  std::vector<std::string> modified;
};

std::vector<CommitInfo> list_commits(const std::string& repo, Lang lang) {
  const std::string log = git_checked(
      repo, {"log", "--no-merges", "--no-renames", "--reverse", "--format=%x01%H %P %ct",
             "--name-status", "--diff-filter=M"});
  std::vector<CommitInfo> commits;
  std::istringstream in(log);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '\x01') {
      std::istringstream head(line.substr(1));
      std::vector<std::string> fields;
      for (std::string f; head >> f;) fields.push_back(f);
      CommitInfo c;
      c.id = fields.empty() ? "" : fields.front();
      if (fields.size() == 3) {
        c.parent = fields[1];
        c.time = std::stoll(fields[2]);
      } else if (fields.size() == 2) {
        c.time = std::stoll(fields[1]);  // root commit
      }
      commits.push_back(std::move(c));
      continue;
    }
    const auto tab = line.find('\t');
    if (commits.empty() || tab == std::string::npos || line.front() != 'M') continue;
    const std::string path = line.substr(tab + 1);
    if (has_extension(path, lang)) commits.back().modified.push_back(path);
  }
  return commits;
}

std::map<std::string, const MethodDef*> by_identity(const std::vector<MethodDef>& defs) {
  std::map<std::string, const MethodDef*> out;
  // Overloads that collapse to one signature are ambiguous; drop them.
  std::set<std::string> dup;
  for (const auto& d : defs) {
    const auto key = d.identity.canonical();
    if (!out.emplace(key, &d).second) dup.insert(key);
  }
  for (const auto& k : dup) out.erase(k);
  return out;
}

// Tokens grouped by source line, each line normalized to its subtokens.
std::vector<std::string> normalized_lines(const TokenSequence& seq) {
  std::vector<std::string> lines;
  int current = -1;
  for (const auto& tok : seq.tokens) {
    if (lines.empty() || tok.line != current) {
      lines.emplace_back();
      current = tok.line;
    }
    for (const auto& piece : subtokens(tok)) {
      if (!lines.back().empty()) lines.back() += ' ';
      lines.back() += piece;
    }
  }
  return lines;
}

// Elements whose count grows from `from` to `to`.
std::vector<std::string> grown(const std::vector<std::string>& from, const std::vector<std::string>& to) {
  std::map<std::string, long> delta;
  for (const auto& s : to) ++delta[s];
  for (const auto& s : from) --delta[s];
  std::vector<std::string> out;
  for (const auto& [k, v] : delta) {
    if (v > 0) out.push_back(k);
  }
  return out;
}

std::string file_stem(const std::string& path) {
  const auto slash = path.find_last_of('/');
  std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
  const auto dot = name.find_last_of('.');
  if (dot != std::string::npos && dot > 0) name.resize(dot);
  return name;
}

bool pair_less(const AlignedChangePair& a, const AlignedChangePair& b) {
  return std::tie(a.target.commit_time, a.source.commit_time, a.target.commit_id, a.source.commit_id,
                  a.source.identity, a.target.identity) <
         std::tie(b.target.commit_time, b.source.commit_time, b.target.commit_id, b.source.commit_id,
                  b.source.identity, b.target.identity);
}

}  // namespace

ExtractReport extract_changes(const std::string& repo_path, Lang lang) {
  ExtractReport report;
  for (const auto& commit : list_commits(repo_path, lang)) {
    if (commit.parent.empty()) continue;
    for (const auto& path : commit.modified) {
      std::vector<MethodDef> before;
      std::vector<MethodDef> after;
      try {
        before = scan_methods(lex(git_checked(repo_path, {"show", commit.parent + ":" + path}), lang), path);
        after = scan_methods(lex(git_checked(repo_path, {"show", commit.id + ":" + path}), lang), path);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::RepoUnreadable) throw;
        report.skipped.push_back(commit.id + ":" + path + ": " + e.what());
        continue;
      }
      const auto old_methods = by_identity(before);
      for (const auto& [key, def] : by_identity(after)) {
        const auto it = old_methods.find(key);
        if (it == old_methods.end()) continue;
        if (it->second->tokens == def->tokens) continue;
        report.changes.push_back({def->identity, it->second->tokens, def->tokens, commit.id, commit.time});
      }
    }
  }
  return report;
}

std::string normalized_identifier(const MethodIdentity& id) {
  std::string out;
  std::vector<std::string> pieces = split_identifier(file_stem(id.file_path));
  for (const auto& p : split_identifier(id.class_name)) pieces.push_back(p);
  for (const auto& p : split_identifier(id.signature)) pieces.push_back(p);
  for (const auto& p : pieces) {
    if (!out.empty()) out += ' ';
    out += p;
  }
  return out;
}

double levenshtein_ratio(std::string_view a, std::string_view b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return 1.0 - static_cast<double>(row[b.size()]) / static_cast<double>(longest);
}

std::vector<std::pair<MethodIdentity, MethodIdentity>> pair_methods(
    const std::vector<MethodIdentity>& src, const std::vector<MethodIdentity>& tgt, double cutoff) {
  struct Candidate {
    double score;
    std::size_t s;
    std::size_t t;
  };
  std::vector<std::string> sn;
  std::vector<std::string> tn;
  for (const auto& id : src) sn.push_back(normalized_identifier(id));
  for (const auto& id : tgt) tn.push_back(normalized_identifier(id));

  std::vector<Candidate> cands;
  for (std::size_t i = 0; i < src.size(); ++i) {
    for (std::size_t j = 0; j < tgt.size(); ++j) {
      const double la = static_cast<double>(sn[i].size());
      const double lb = static_cast<double>(tn[j].size());
      // The ratio can never exceed min/max length.
      if (std::max(la, lb) > 0 && std::min(la, lb) / std::max(la, lb) < cutoff) continue;
      const double score = sn[i] == tn[j] ? 1.0 : levenshtein_ratio(sn[i], tn[j]);
      if (score >= cutoff) cands.push_back({score, i, j});
    }
  }
  std::sort(cands.begin(), cands.end(), [&](const Candidate& x, const Candidate& y) {
    if (x.score != y.score) return x.score > y.score;
    return std::tie(src[x.s], tgt[x.t]) < std::tie(src[y.s], tgt[y.t]);
  });
  std::vector<bool> used_s(src.size());
  std::vector<bool> used_t(tgt.size());
  std::vector<std::pair<MethodIdentity, MethodIdentity>> out;
  for (const auto& c : cands) {
    if (used_s[c.s] || used_t[c.t]) continue;
    used_s[c.s] = used_t[c.t] = true;
    out.emplace_back(src[c.s], tgt[c.t]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const std::set<std::string> sa(a.begin(), a.end());
  const std::set<std::string> sb(b.begin(), b.end());
  if (sa.empty() && sb.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& x : sa) common += sb.count(x);
  return static_cast<double>(common) / static_cast<double>(sa.size() + sb.size() - common);
}

double SimilarityComponents::mean() const {
  const double v[4] = {added_subtokens, removed_subtokens, added_lines, removed_lines};
  double sum = 0;
  int n = 0;
  for (int k = 0; k < 4; ++k) {
    if (active[k]) {
      sum += v[k];
      ++n;
    }
  }
  return n ? sum / n : 0.0;
}

SimilarityComponents change_similarity(const MethodChange& src, const MethodChange& tgt) {
  const auto s_old = subtoken_list(src.old_body);
  const auto s_new = subtoken_list(src.new_body);
  const auto t_old = subtoken_list(tgt.old_body);
  const auto t_new = subtoken_list(tgt.new_body);
  const auto sl_old = normalized_lines(src.old_body);
  const auto sl_new = normalized_lines(src.new_body);
  const auto tl_old = normalized_lines(tgt.old_body);
  const auto tl_new = normalized_lines(tgt.new_body);

  const std::vector<std::string> parts[4][2] = {
      {grown(s_old, s_new), grown(t_old, t_new)},
      {grown(s_new, s_old), grown(t_new, t_old)},
      {grown(sl_old, sl_new), grown(tl_old, tl_new)},
      {grown(sl_new, sl_old), grown(tl_new, tl_old)},
  };
  SimilarityComponents c;
  double* values[4] = {&c.added_subtokens, &c.removed_subtokens, &c.added_lines, &c.removed_lines};
  for (int k = 0; k < 4; ++k) {
    c.active[k] = !parts[k][0].empty() || !parts[k][1].empty();
    *values[k] = c.active[k] ? jaccard(parts[k][0], parts[k][1]) : 0.0;
  }
  return c;
}

std::vector<AlignedChangePair> align_changes(const std::vector<MethodChange>& src,
                                             const std::vector<MethodChange>& tgt,
                                             const AlignOptions& options, const std::string& project) {
  std::vector<MethodIdentity> src_ids;
  std::vector<MethodIdentity> tgt_ids;
  for (const auto& c : src) src_ids.push_back(c.identity);
  for (const auto& c : tgt) tgt_ids.push_back(c.identity);
  std::sort(src_ids.begin(), src_ids.end());
  src_ids.erase(std::unique(src_ids.begin(), src_ids.end()), src_ids.end());
  std::sort(tgt_ids.begin(), tgt_ids.end());
  tgt_ids.erase(std::unique(tgt_ids.begin(), tgt_ids.end()), tgt_ids.end());
  const std::map<MethodIdentity, MethodIdentity> paired = [&] {
    std::map<MethodIdentity, MethodIdentity> m;
    for (auto& [a, b] : pair_methods(src_ids, tgt_ids, options.identifier_cutoff)) m.emplace(a, b);
    return m;
  }();

  std::multimap<MethodIdentity, std::size_t> tgt_by_id;
  for (std::size_t j = 0; j < tgt.size(); ++j) tgt_by_id.emplace(tgt[j].identity, j);

  const auto window = static_cast<std::int64_t>(std::llround(options.window_days * kSecondsPerDay));
  struct Candidate {
    std::size_t s;
    std::size_t t;
    SimilarityComponents comp;
    double sim;
  };
  std::vector<Candidate> cands;
  for (std::size_t i = 0; i < src.size(); ++i) {
    const auto p = paired.find(src[i].identity);
    if (p == paired.end()) continue;
    const auto [lo, hi] = tgt_by_id.equal_range(p->second);
    for (auto it = lo; it != hi; ++it) {
      const auto& t = tgt[it->second];
      const std::int64_t gap = t.commit_time - src[i].commit_time;
      if (gap < 0 || gap > window) continue;
      const auto comp = change_similarity(src[i], t);
      const double sim = comp.mean();
      if (sim < options.jaccard_min) continue;
      cands.push_back({i, it->second, comp, sim});
    }
  }
  std::sort(cands.begin(), cands.end(), [&](const Candidate& x, const Candidate& y) {
    if (x.sim != y.sim) return x.sim > y.sim;
    const auto gx = tgt[x.t].commit_time - src[x.s].commit_time;
    const auto gy = tgt[y.t].commit_time - src[y.s].commit_time;
    if (gx != gy) return gx < gy;
    return std::tie(src[x.s].commit_id, tgt[x.t].commit_id, x.s, x.t) <
           std::tie(src[y.s].commit_id, tgt[y.t].commit_id, y.s, y.t);
  });

  std::vector<bool> used_s(src.size());
  std::vector<bool> used_t(tgt.size());
  std::vector<AlignedChangePair> out;
  for (const auto& c : cands) {
    if (used_s[c.s] || used_t[c.t]) continue;
    used_s[c.s] = used_t[c.t] = true;
    out.push_back({project, src[c.s], tgt[c.t], c.sim, c.comp});
  }
  std::sort(out.begin(), out.end(), pair_less);
  return out;
}

MineResult mine(const std::string& src_repo, Lang src_lang, const std::string& tgt_repo, Lang tgt_lang,
                const AlignOptions& options, const std::string& project) {
  auto src_future = std::async(std::launch::async, [&] { return extract_changes(src_repo, src_lang); });
  auto tgt_report = extract_changes(tgt_repo, tgt_lang);
  auto src_report = src_future.get();

  MineResult result;
  result.src_changes = src_report.changes.size();
  result.tgt_changes = tgt_report.changes.size();
  result.pairs = align_changes(src_report.changes, tgt_report.changes, options, project);
  result.skipped = std::move(src_report.skipped);
  result.skipped.insert(result.skipped.end(), tgt_report.skipped.begin(), tgt_report.skipped.end());
  return result;
}

DatasetSplit split_time_segmented(std::vector<AlignedChangePair> pairs, double train, double valid) {
  if (pairs.empty()) throw Error(ErrorCode::EmptyProject, "no change pairs to split");
  if (!(train >= 0) || !(valid >= 0) || train + valid > 1.0 + 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "split ratios must be non-negative and sum to at most 1");
  }
  std::map<std::string, std::vector<AlignedChangePair>> by_project;
  for (auto& p : pairs) by_project[p.project].push_back(std::move(p));

  DatasetSplit split;
  for (auto& [project, items] : by_project) {
    std::sort(items.begin(), items.end(), pair_less);
    const auto n = static_cast<double>(items.size());
    const auto n_train = static_cast<std::size_t>(std::floor(train * n + 1e-9));
    const auto n_valid = std::min(items.size() - n_train, static_cast<std::size_t>(std::floor(valid * n + 1e-9)));
    for (std::size_t i = 0; i < items.size(); ++i) {
      auto& bucket = i < n_train ? split.train : i < n_train + n_valid ? split.valid : split.test;
      bucket.push_back(std::move(items[i]));
    }
  }
  return split;
}

SideStats side_stats(const std::vector<std::pair<Tokens, Tokens>>& old_new) {
  SideStats s;
  s.count = old_new.size();
  if (s.count == 0) return s;
  for (const auto& [o, n] : old_new) {
    const auto script = diff(o, n);
    s.avg_old_len += static_cast<double>(o.size());
    s.avg_new_len += static_cast<double>(n.size());
    s.avg_edits += static_cast<double>(script.edits.size());
    for (const auto& e : script.edits) {
      s.avg_added += static_cast<double>(e.new_span.size());
      s.avg_deleted += static_cast<double>(e.old_span.size());
    }
  }
  const double c = static_cast<double>(s.count);
  s.avg_old_len /= c;
  s.avg_new_len /= c;
  s.avg_edits /= c;
  s.avg_added /= c;
  s.avg_deleted /= c;
  return s;
}

std::vector<SplitStats> dataset_stats(const DatasetSplit& split) {
  std::vector<SplitStats> out;
  const std::pair<const char*, const std::vector<AlignedChangePair>*> parts[] = {
      {"train", &split.train}, {"valid", &split.valid}, {"test", &split.test}};
  // Empty splits report the languages of the non-empty ones.
  Lang src_lang = Lang::Java;
  Lang tgt_lang = Lang::CSharp;
  for (const auto& [name, items] : parts) {
    if (!items->empty()) {
      src_lang = items->front().source.old_body.lang;
      tgt_lang = items->front().target.old_body.lang;
      break;
    }
  }
  for (const auto& [name, items] : parts) {
    SplitStats st;
    st.split = name;
    st.src_lang = src_lang;
    st.tgt_lang = tgt_lang;
    std::vector<std::pair<Tokens, Tokens>> src;
    std::vector<std::pair<Tokens, Tokens>> tgt;
    for (const auto& p : *items) {
      src.emplace_back(p.source.old_body.texts(), p.source.new_body.texts());
      tgt.emplace_back(p.target.old_body.texts(), p.target.new_body.texts());
    }
    st.source = side_stats(src);
    st.target = side_stats(tgt);
    out.push_back(std::move(st));
  }
  return out;
}

}  // namespace coedit
