// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 gcnsum developers

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gcnsum {

enum class TruncationUnit { None, Words, Bytes };

struct RougeConfig {
  std::size_t n = 1;
  bool stemming = true;
  TruncationUnit truncation = TruncationUnit::None;
  std::size_t limit = 0;
};

struct RougeScore {
  double recall = 0.0;
  double overlap = 0.0;          // clipped matches, summed over references
  double reference_count = 0.0;  // n-grams, summed over references
};

/// ROUGE preprocessing of raw text: lowercase, every non-alphanumeric byte
/// becomes a separator.
std::vector<std::string> rouge_tokens(std::string_view text);

/// Stemming as applied by ROUGE with "-m": Porter stem for tokens longer
/// than three characters, identity otherwise.
std::string rouge_stem(const std::string& token);

/// Applies the configured truncation to already-tokenized text. Byte
/// truncation measures the tokens joined by single spaces.
std::vector<std::string> truncate_tokens(const std::vector<std::string>& tokens,
                                         TruncationUnit unit, std::size_t limit);

/// Recall of `candidate` n-grams against each reference (clipped counts),
/// averaged over references. Tokens are normalized with rouge_tokens first.
RougeScore rouge_n_recall(const std::vector<std::string>& candidate,
                          const std::vector<std::vector<std::string>>& references,
                          const RougeConfig& config);

/// Convenience overload over raw text.
RougeScore rouge_n_recall_text(std::string_view candidate,
                               const std::vector<std::string>& references,
                               const RougeConfig& config);

struct ClusterRouge {
  std::string id;
  double r1 = 0.0;
  double r2 = 0.0;
};

struct SystemReport {
  std::string system;
  std::vector<ClusterRouge> clusters;
  double r1 = 0.0;  // macro average, x100
  double r2 = 0.0;  // macro average, x100
  std::optional<double> ci_low;   // bootstrap 95% interval on R-1, x100
  std::optional<double> ci_high;
};

struct EvaluationOptions {
  bool stemming = true;
  TruncationUnit truncation = TruncationUnit::Words;
  std::size_t limit = 100;
  std::size_t bootstrap_samples = 1000;  // 0 disables the interval
  double confidence = 0.95;
  std::uint64_t seed = 1;
};

/// Scores system summaries against per-cluster references. Every id in
/// `summaries` must have references.
SystemReport evaluate_system(const std::string& system,
                             const std::map<std::string, std::string>& summaries,
                             const std::map<std::string, std::vector<std::string>>& references,
                             const EvaluationOptions& options = {});

/// Tab-separated: system, R-1, R-2, CI-low, CI-high (scores x100).
std::string format_report(const SystemReport& report, bool per_cluster = false);

}  // namespace gcnsum
