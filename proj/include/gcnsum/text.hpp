// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 gcnsum developers

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace gcnsum {

/// Splits text into word and punctuation tokens, preserving case.
///
/// Rules: whitespace separates tokens; a word is a maximal run of ASCII
/// letters, digits and non-ASCII bytes; every other printable byte is a
/// single punctuation token.
std::vector<std::string> tokenize_cased(std::string_view text);

/// tokenize_cased() followed by ASCII lowercasing.
std::vector<std::string> tokenize(std::string_view text);

std::string to_lower(std::string_view s);

/// True for a token made only of punctuation bytes.
bool is_punctuation(std::string_view token);

/// Number of non-punctuation tokens.
std::size_t word_count(const std::vector<std::string>& tokens);

/// Splits raw text on '.', '!' and '?' followed by whitespace. Used only for
/// raw-text ingestion; the corpus format delivers pre-split sentences.
std::vector<std::string> split_sentences(std::string_view text);

/// Porter (1980) stemmer for lowercase ASCII words. Tokens with non-letter
/// bytes are returned unchanged.
std::string porter_stem(std::string_view word);

using SparseVector = std::map<std::string, double>;

/// dot(u, v) / (|u| |v|); 0 when either vector is zero.
double cosine(const SparseVector& u, const SparseVector& v);

/// Terms used for tf-idf: Porter stems of the non-punctuation tokens.
std::vector<std::string> tfidf_terms(const std::vector<std::string>& tokens);

/// Sentence-level tf-idf over one cluster.
///
/// idf(t) = 1 + ln(N / df(t)) with df counted over the N sentences the model
/// was built from.
class TfIdfModel {
 public:
  TfIdfModel() = default;
  /// Each element is one sentence's lowercase token list.
  explicit TfIdfModel(const std::vector<std::vector<std::string>>& sentences);

  std::size_t num_sentences() const noexcept { return n_; }
  std::size_t vocabulary_size() const noexcept { return idf_.size(); }
  bool contains(const std::string& term) const { return idf_.count(term) != 0; }
  double idf(const std::string& term) const;
  const std::map<std::string, double>& idf_table() const noexcept { return idf_; }

  /// tf * idf over the tokens' terms; terms outside the vocabulary are dropped.
  SparseVector vector(const std::vector<std::string>& tokens) const;

 private:
  std::size_t n_ = 0;
  std::map<std::string, double> idf_;
};

}  // namespace gcnsum
