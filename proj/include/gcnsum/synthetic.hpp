// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 gcnsum developers

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gcnsum/corpus.hpp"

namespace gcnsum {

/// News-like synthetic clusters. Each cluster has one planted sentence that
/// the single reference summary paraphrases closely, so it carries by far
/// the highest ROUGE target. Entity names recur across documents, some
/// sentences open with discourse markers, and a few are too short to be
/// extracted.
struct SyntheticOptions {
  std::size_t clusters = 5;
  std::size_t min_documents = 2;
  std::size_t max_documents = 3;
  std::size_t min_sentences = 3;
  std::size_t max_sentences = 5;
  std::string id_prefix = "syn";
  std::uint64_t seed = 7;
};

struct SyntheticCluster {
  Cluster cluster;
  std::size_t planted = 0;  // cluster-local index of the planted sentence
};

std::vector<SyntheticCluster> make_synthetic(const SyntheticOptions& options);
std::vector<Cluster> make_synthetic_corpus(const SyntheticOptions& options);

}  // namespace gcnsum
