// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 gcnsum developers

#include "gcnsum/rouge.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <unordered_map>

#include "gcnsum/error.hpp"
#include "gcnsum/text.hpp"

namespace gcnsum {

std::vector<std::string> rouge_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string rouge_stem(const std::string& token) {
  return token.size() > 3 ? porter_stem(token) : token;
}

namespace {

std::string join(const std::vector<std::string>& tokens) {
  std::string s;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) s.push_back(' ');
    s += tokens[i];
  }
  return s;
}

using NgramCounts = std::unordered_map<std::string, double>;

NgramCounts ngrams(const std::vector<std::string>& toks, std::size_t n) {
  NgramCounts out;
  if (toks.size() < n) return out;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    std::string key = toks[i];
    for (std::size_t k = 1; k < n; ++k) {
      key.push_back('\x1f');
      key += toks[i + k];
    }
    out[key] += 1.0;
  }
  return out;
}

std::vector<std::string> prepare(const std::vector<std::string>& tokens, bool stemming) {
  auto toks = rouge_tokens(join(tokens));
  if (stemming)
    for (auto& t : toks) t = rouge_stem(t);
  return toks;
}

}  // namespace

std::vector<std::string> truncate_tokens(const std::vector<std::string>& tokens,
                                         TruncationUnit unit, std::size_t limit) {
  switch (unit) {
    case TruncationUnit::None: return tokens;
    case TruncationUnit::Words:
      return {tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(
                                                   std::min(limit, tokens.size()))};
    case TruncationUnit::Bytes: {
      std::string s = join(tokens);
      if (s.size() > limit) s.resize(limit);
      std::vector<std::string> out;
      std::istringstream in(s);
      std::string t;
      while (in >> t) out.push_back(t);
      return out;
    }
  }
  return tokens;
}

RougeScore rouge_n_recall(const std::vector<std::string>& candidate,
                          const std::vector<std::vector<std::string>>& references,
                          const RougeConfig& config) {
  if (config.n < 1) throw InvalidArgument("rouge: n must be >= 1");
  RougeScore score;
  if (references.empty()) return score;
  // Byte limits apply to the text as written; word limits to ROUGE words.
  std::vector<std::string> cand;
  if (config.truncation == TruncationUnit::Bytes) {
    cand = prepare(truncate_tokens(candidate, TruncationUnit::Bytes, config.limit), config.stemming);
  } else {
    cand = truncate_tokens(prepare(candidate, config.stemming), config.truncation, config.limit);
  }
  const NgramCounts cgrams = ngrams(cand, config.n);
  double recall_sum = 0.0;
  for (const auto& ref : references) {
    const NgramCounts rgrams = ngrams(prepare(ref, config.stemming), config.n);
    double count = 0.0, hit = 0.0;
    for (const auto& [g, c] : rgrams) {
      count += c;
      auto it = cgrams.find(g);
      if (it != cgrams.end()) hit += std::min(c, it->second);
    }
    score.overlap += hit;
    score.reference_count += count;
    recall_sum += count > 0.0 ? hit / count : 0.0;
  }
  score.recall = recall_sum / static_cast<double>(references.size());
  return score;
}

RougeScore rouge_n_recall_text(std::string_view candidate,
                               const std::vector<std::string>& references,
                               const RougeConfig& config) {
  std::vector<std::vector<std::string>> refs;
  for (const auto& r : references) refs.push_back(rouge_tokens(r));
  std::vector<std::string> cand;
  if (config.truncation == TruncationUnit::Bytes) {
    cand = rouge_tokens(candidate.substr(0, std::min(config.limit, candidate.size())));
    RougeConfig c = config;
    c.truncation = TruncationUnit::None;
    return rouge_n_recall(cand, refs, c);
  }
  return rouge_n_recall(rouge_tokens(candidate), refs, config);
}

SystemReport evaluate_system(const std::string& system,
                             const std::map<std::string, std::string>& summaries,
                             const std::map<std::string, std::vector<std::string>>& references,
                             const EvaluationOptions& options) {
  SystemReport rep;
  rep.system = system;
  if (summaries.empty()) throw ContractError("evaluate: no summaries");
  for (const auto& [id, text] : summaries) {
    auto it = references.find(id);
    if (it == references.end() || it->second.empty())
      throw ContractError("evaluate: no references for cluster '" + id + "'");
    RougeConfig cfg{1, options.stemming, options.truncation, options.limit};
    ClusterRouge cr{id, rouge_n_recall_text(text, it->second, cfg).recall, 0.0};
    cfg.n = 2;
    cr.r2 = rouge_n_recall_text(text, it->second, cfg).recall;
    rep.clusters.push_back(cr);
  }
  const double m = static_cast<double>(rep.clusters.size());
  for (const auto& c : rep.clusters) {
    rep.r1 += c.r1;
    rep.r2 += c.r2;
  }
  rep.r1 = 100.0 * rep.r1 / m;
  rep.r2 = 100.0 * rep.r2 / m;

  if (options.bootstrap_samples > 0) {
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::size_t> pick(0, rep.clusters.size() - 1);
    std::vector<double> means;
    means.reserve(options.bootstrap_samples);
    for (std::size_t b = 0; b < options.bootstrap_samples; ++b) {
      double s = 0.0;
      for (std::size_t k = 0; k < rep.clusters.size(); ++k) s += rep.clusters[pick(rng)].r1;
      means.push_back(100.0 * s / m);
    }
    std::sort(means.begin(), means.end());
    const double tail = (1.0 - options.confidence) / 2.0;
    auto at = [&](double q) {
      const auto idx = static_cast<std::size_t>(
          std::clamp(std::floor(q * static_cast<double>(means.size())), 0.0,
                     static_cast<double>(means.size() - 1)));
      return means[idx];
    };
    rep.ci_low = at(tail);
    rep.ci_high = at(1.0 - tail);
  }
  return rep;
}

std::string format_report(const SystemReport& report, bool per_cluster) {
  std::ostringstream os;
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  os << "system\tR-1\tR-2\tCI-low\tCI-high\n";
  if (per_cluster)
    for (const auto& c : report.clusters)
      os << report.system << ':' << c.id << '\t' << num(100.0 * c.r1) << '\t'
         << num(100.0 * c.r2) << "\t-\t-\n";
  os << report.system << '\t' << num(report.r1) << '\t' << num(report.r2) << '\t'
     << (report.ci_low ? num(*report.ci_low) : "-") << '\t'
     << (report.ci_high ? num(*report.ci_high) : "-") << '\n';
  return os.str();
}

}  // namespace gcnsum
