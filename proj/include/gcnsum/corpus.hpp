// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 gcnsum developers

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "gcnsum/tensor.hpp"

namespace gcnsum {

struct Sentence {
  std::size_t index = 0;     // cluster-local, contiguous
  std::size_t document = 0;  // document index within the cluster
  std::size_t position = 0;  // 0-based position within its document
  std::string text;
  std::vector<std::string> cased_tokens;
  std::vector<std::string> tokens;  // lowercase
  std::size_t word_count = 0;       // tokens excluding punctuation
};

/// A set of documents summarized jointly. Sentences are stored flat, in
/// document order; document d occupies [doc_begin(d), doc_end(d)).
class Cluster {
 public:
  Cluster() = default;
  /// Validates and tokenizes. Throws ContractError on an empty cluster, an
  /// empty document or a sentence without tokens.
  static Cluster from_documents(std::string id,
                                const std::vector<std::vector<std::string>>& documents,
                                std::vector<std::string> references = {});

  const std::string& id() const noexcept { return id_; }
  std::size_t size() const noexcept { return sentences_.size(); }
  std::size_t num_documents() const noexcept { return offsets_.size() - 1; }
  std::size_t doc_begin(std::size_t d) const { return offsets_.at(d); }
  std::size_t doc_end(std::size_t d) const { return offsets_.at(d + 1); }
  std::size_t doc_size(std::size_t d) const { return doc_end(d) - doc_begin(d); }
  const std::vector<std::size_t>& doc_offsets() const noexcept { return offsets_; }

  const std::vector<Sentence>& sentences() const noexcept { return sentences_; }
  const Sentence& sentence(std::size_t i) const { return sentences_.at(i); }

  const std::vector<std::string>& references() const noexcept { return references_; }
  const std::vector<std::vector<std::string>>& reference_tokens() const noexcept {
    return reference_tokens_;
  }
  bool has_references() const noexcept { return !references_.empty(); }

  /// Documents as lists of sentence strings (the JSONL shape).
  std::vector<std::vector<std::string>> documents() const;

  /// Copy of this cluster with documents reordered by `order`.
  Cluster permute_documents(const std::vector<std::size_t>& order) const;

 private:
  std::string id_;
  std::vector<Sentence> sentences_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::string> references_;
  std::vector<std::vector<std::string>> reference_tokens_;
};

/// Reads the corpus JSONL format: one cluster per line,
/// {"id": str, "documents": [[sentence, ...], ...], "references": [str, ...]}.
std::vector<Cluster> load_corpus(const std::filesystem::path& path);
std::vector<Cluster> parse_corpus(const std::string& jsonl, const std::string& source = "<memory>");
void save_corpus(const std::filesystem::path& path, const std::vector<Cluster>& clusters);

/// Word -> row index. Row 0 is reserved for unknown words.
class Vocabulary {
 public:
  static constexpr const char* kUnknown = "<unk>";
  Vocabulary();
  explicit Vocabulary(const std::vector<std::string>& words);
  static Vocabulary from_clusters(const std::vector<const Cluster*>& clusters);

  std::size_t size() const noexcept { return words_.size(); }
  const std::string& word(std::size_t id) const { return words_.at(id); }
  const std::vector<std::string>& words() const noexcept { return words_; }
  bool contains(const std::string& w) const { return index_.count(w) != 0; }
  std::size_t add(const std::string& w);
  /// Index of `w`, or 0 when unknown.
  std::size_t lookup(const std::string& w) const;
  std::vector<std::size_t> lookup(const std::vector<std::string>& tokens) const;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct EmbeddingTable {
  Vocabulary vocab;
  Tensor matrix;                // |V| x dim
  std::vector<bool> pretrained;  // false: row drawn from uniform(-0.05, 0.05)
  bool trainable = true;

  std::size_t dim() const { return matrix.cols(); }
};

/// All rows seeded uniform(-0.05, 0.05).
EmbeddingTable random_embeddings(const Vocabulary& vocab, std::size_t dim, std::uint64_t seed);

/// Reads word2vec text format (optional "count dim" header line, then
/// "word v1 ... vD" per line). Rows for vocabulary words found in the file
/// are copied; the rest are seeded uniform(-0.05, 0.05).
EmbeddingTable load_embeddings(const std::filesystem::path& path, const Vocabulary& vocab,
                               std::size_t dim, std::uint64_t seed);

// --- surface annotation -------------------------------------------------

/// Heuristic part-of-speech style annotation of one sentence. All word
/// lists hold Porter stems of lowercase tokens.
struct SentenceAnnotation {
  std::vector<std::string> verbs;
  std::vector<std::string> common_nouns;
  std::vector<std::string> deverbal_nouns;
  std::vector<std::string> proper_nouns;
  /// Maximal runs of adjacent proper-noun tokens ("Barack Obama" is one).
  std::vector<std::vector<std::string>> proper_mentions;
  bool starts_with_marker = false;

  std::set<std::string> verb_set() const { return {verbs.begin(), verbs.end()}; }
  std::set<std::string> common_set() const { return {common_nouns.begin(), common_nouns.end()}; }
  std::set<std::string> proper_set() const { return {proper_nouns.begin(), proper_nouns.end()}; }
};

/// The shipped discourse-marker lexicon, lowercase, possibly multi-word.
const std::vector<std::string>& discourse_markers();
bool is_stopword(const std::string& lower_token);

std::vector<SentenceAnnotation> annotate(const Cluster& cluster);

inline constexpr std::size_t kNumFeatures = 8;

struct SentenceFeatures {
  double position = 0.0;  // position / (document length - 1), 0 for singletons
  double in_first_three = 0.0;
  double proper_noun_count = 0.0;
  double over_twenty_tokens = 0.0;
  double length = 0.0;
  double coref_verb_mentions = 0.0;
  double coref_common_noun_mentions = 0.0;
  double coref_proper_noun_mentions = 0.0;

  std::array<double, kNumFeatures> as_array() const {
    return {position, in_first_three, proper_noun_count, over_twenty_tokens,
            length, coref_verb_mentions, coref_common_noun_mentions,
            coref_proper_noun_mentions};
  }
  friend bool operator==(const SentenceFeatures&, const SentenceFeatures&) = default;
};

std::vector<SentenceFeatures> extract_features(const Cluster& cluster);

}  // namespace gcnsum
