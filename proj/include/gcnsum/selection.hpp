// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 gcnsum developers

#pragma once

#include <span>
#include <string>
#include <vector>

#include "gcnsum/corpus.hpp"
#include "gcnsum/rouge.hpp"
#include "gcnsum/text.hpp"

namespace gcnsum {

struct SummaryLimit {
  TruncationUnit unit = TruncationUnit::Words;
  std::size_t value = 100;
};

struct SelectionConfig {
  std::size_t min_words = 8;
  std::size_t max_words = 55;
  double redundancy_threshold = 0.5;
  SummaryLimit limit;

  void validate() const;
};

struct Summary {
  std::vector<std::size_t> indices;  // selection order
  std::string text;                  // one sentence per line, truncated to the limit
  std::size_t length = 0;            // in the limit's unit, after truncation
};

/// Cosine between the candidate's tf-idf vector and the tf-idf vector of
/// all summary tokens pooled; 0 for an empty summary.
double redundancy(const std::vector<std::string>& candidate,
                  const std::vector<std::string>& summary_tokens, const TfIdfModel& model);

/// Length of `text` in the limit's unit (words: non-punctuation tokens).
std::size_t summary_length(const std::string& text, TruncationUnit unit);

/// Cuts `text` to at most `limit` words or bytes.
std::string truncate_text(const std::string& text, const SummaryLimit& limit);

/// Greedy selection by descending score (ties: lower index first), skipping
/// sentences outside [min_words, max_words], sentences more redundant than
/// the threshold, and sentences that would overflow the limit.
Summary select(std::span<const double> scores, const Cluster& cluster, const TfIdfModel& model,
               const SelectionConfig& config);

/// Builds the cluster's sentence-level tf-idf model and selects.
Summary select(std::span<const double> scores, const Cluster& cluster,
               const SelectionConfig& config);

TfIdfModel cluster_tfidf(const Cluster& cluster);

}  // namespace gcnsum
