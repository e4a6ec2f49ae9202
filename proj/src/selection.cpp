// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 gcnsum developers

#include "gcnsum/selection.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "gcnsum/error.hpp"

namespace gcnsum {

void SelectionConfig::validate() const {
  if (!(min_words > 0 && min_words < max_words))
    throw InvalidArgument("selection: need 0 < min_words < max_words");
  if (!(redundancy_threshold > 0.0 && redundancy_threshold <= 1.0))
    throw InvalidArgument("selection: redundancy threshold must be in (0, 1]");
}

TfIdfModel cluster_tfidf(const Cluster& cluster) {
  std::vector<std::vector<std::string>> toks;
  toks.reserve(cluster.size());
  for (const auto& s : cluster.sentences()) toks.push_back(s.tokens);
  return TfIdfModel(toks);
}

double redundancy(const std::vector<std::string>& candidate,
                  const std::vector<std::string>& summary_tokens, const TfIdfModel& model) {
  if (summary_tokens.empty()) return 0.0;
  return cosine(model.vector(candidate), model.vector(summary_tokens));
}

std::size_t summary_length(const std::string& text, TruncationUnit unit) {
  switch (unit) {
    case TruncationUnit::Bytes: return text.size();
    case TruncationUnit::Words: return word_count(tokenize(text));
    case TruncationUnit::None: return 0;
  }
  return 0;
}

std::string truncate_text(const std::string& text, const SummaryLimit& limit) {
  if (limit.unit == TruncationUnit::None) return text;
  if (limit.unit == TruncationUnit::Bytes)
    return text.size() <= limit.value ? text : text.substr(0, limit.value);
  // Cut right after the limit-th word token.
  std::size_t words = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (std::isalnum(c) || c >= 0x80) {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) ||
              static_cast<unsigned char>(text[j]) >= 0x80))
        ++j;
      if (++words == limit.value) {
        // Keep punctuation glued to the last word.
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) &&
               !std::isalnum(static_cast<unsigned char>(text[j])) &&
               static_cast<unsigned char>(text[j]) < 0x80)
          ++j;
        return text.substr(0, j);
      }
      i = j;
    } else {
      ++i;
    }
  }
  return text;
}

Summary select(std::span<const double> scores, const Cluster& cluster, const TfIdfModel& model,
               const SelectionConfig& config) {
  config.validate();
  if (scores.size() != cluster.size())
    throw DimensionError("select: " + std::to_string(scores.size()) + " scores for " +
                         std::to_string(cluster.size()) + " sentences");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  Summary out;
  std::vector<std::string> pooled;
  std::size_t used = 0;
  const bool bounded = config.limit.unit != TruncationUnit::None;
  for (std::size_t i : order) {
    const Sentence& s = cluster.sentence(i);
    if (s.word_count < config.min_words || s.word_count > config.max_words) continue;
    if (redundancy(s.tokens, pooled, model) > config.redundancy_threshold) continue;
    std::size_t cost = 0;
    if (config.limit.unit == TruncationUnit::Words) cost = s.word_count;
    if (config.limit.unit == TruncationUnit::Bytes)
      cost = s.text.size() + (out.indices.empty() ? 0 : 1);
    if (bounded && used + cost > config.limit.value) continue;
    used += cost;
    out.indices.push_back(i);
    pooled.insert(pooled.end(), s.tokens.begin(), s.tokens.end());
  }
  std::string text;
  for (std::size_t k = 0; k < out.indices.size(); ++k) {
    if (k) text.push_back('\n');
    text += cluster.sentence(out.indices[k]).text;
  }
  out.text = truncate_text(text, config.limit);
  out.length = summary_length(out.text, config.limit.unit);
  return out;
}

Summary select(std::span<const double> scores, const Cluster& cluster,
               const SelectionConfig& config) {
  return select(scores, cluster, cluster_tfidf(cluster), config);
}

}  // namespace gcnsum
