// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 gcnsum developers

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gcnsum/autodiff.hpp"
#include "gcnsum/corpus.hpp"
#include "gcnsum/graphs.hpp"

namespace gcnsum {

struct ModelConfig {
  std::size_t embed_dim = 300;
  std::size_t hidden_dim = 300;  // GRU state and GCN width (D = F)
  std::size_t layers = 3;        // 0 bypasses the GCN
};

/// GRU cell weights. Input matrices are [in x hidden] and applied as x W;
/// recurrent matrices are [hidden x hidden] and applied as U h.
///
///   z  = sigmoid(x W_z + U_z h + b_z)
///   r  = sigmoid(x W_r + U_r h + b_r)
///   n  = tanh(x W_n + U_n (r * h) + b_n)
///   h' = z * h + (1 - z) * n
struct GruParams {
  Param w_z, u_z, b_z;
  Param w_r, u_r, b_r;
  Param w_n, u_n, b_n;

  static GruParams zeros(const std::string& prefix, std::size_t in, std::size_t hidden);
  std::vector<Param*> all();
};

struct ModelParams {
  ModelConfig config;
  Vocabulary vocab;
  Param embedding;  // |V| x embed_dim, fine-tuned
  GruParams sentence_gru;
  std::vector<Param> gcn;  // layers x [hidden x hidden]
  GruParams document_gru;
  Param head_v;   // [hidden]
  Param head_w1;  // [hidden x hidden], applied to the cluster embedding
  Param head_w2;  // [hidden x hidden], applied to sentence embeddings as s W2

  /// uniform(-1/sqrt(hidden), 1/sqrt(hidden)) for every weight, seeded.
  static ModelParams initialize(const ModelConfig& config, const EmbeddingTable& embeddings,
                                std::uint64_t seed);

  /// Every learnable tensor, in a fixed order.
  std::vector<Param*> all();
  std::vector<const Param*> all() const;
  /// Parameter groups by name: embedding, sentence_gru, gcn, document_gru, head.
  std::map<std::string, std::vector<Param*>> groups();
  std::size_t num_values() const;
};

/// Per-cluster model input: token ids per sentence, document boundaries and
/// the propagation matrix (absent for the no-graph configuration).
struct ClusterInput {
  std::vector<std::vector<std::size_t>> token_ids;
  std::vector<std::size_t> doc_offsets;
  std::optional<Tensor> adjacency;

  std::size_t size() const noexcept { return token_ids.size(); }
};

ClusterInput make_input(const Cluster& cluster, const Vocabulary& vocab,
                        const SentenceGraph* graph = nullptr);

/// Parameters bound as leaves on one tape.
struct BoundGru {
  Var w_z, u_z, b_z, w_r, u_r, b_r, w_n, u_n, b_n;
};

struct BoundModel {
  Var embedding;
  BoundGru sentence_gru;
  std::vector<Var> gcn;
  BoundGru document_gru;
  Var head_v, head_w1, head_w2;
};

/// Binds as trainable leaves (gradients flow into the Params).
BoundModel bind(Tape& tape, ModelParams& params);
/// Binds as constants (inference only).
BoundModel bind_const(Tape& tape, const ModelParams& params);

Var gru_cell(const BoundGru& gru, const Var& x, const Var& h);
/// Runs the GRU over the rows of `inputs` from a zero state and returns the
/// last hidden state.
Var gru_last_state(const BoundGru& gru, const Var& inputs, std::size_t hidden);

Var encode_sentence(const BoundModel& m, const std::vector<std::size_t>& token_ids,
                    std::size_t hidden);
/// H^{l+1} = ReLU(A H^l W^l) for every layer; returns x itself for no layers.
Var gcn_forward(const Var& x, const Var& adjacency, const std::vector<Var>& weights);
/// Mean over documents of the document GRU's last state over rows of z.
Var encode_cluster(const BoundModel& m, const Var& z, const std::vector<std::size_t>& doc_offsets,
                   std::size_t hidden);
/// softmax_i( v . tanh(W1 c + s_i W2) )
Var salience(const Var& z, const Var& c, const Var& v, const Var& w1, const Var& w2);

/// Full salience network; returns the score vector on the tape.
Var forward(const BoundModel& m, const ClusterInput& input, const ModelConfig& config);

/// Inference without gradients.
std::vector<double> predict(const ModelParams& params, const ClusterInput& input);

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params,
                     const std::map<std::string, std::string>& metadata = {});
ModelParams load_checkpoint(const std::filesystem::path& path,
                            std::map<std::string, std::string>* metadata = nullptr);

}  // namespace gcnsum
