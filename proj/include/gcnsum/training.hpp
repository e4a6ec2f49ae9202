// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 gcnsum developers

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gcnsum/corpus.hpp"
#include "gcnsum/model.hpp"

namespace gcnsum {

struct TrainingConfig {
  double alpha = 40.0;
  double learning_rate = 1e-3;
  std::size_t batch_size = 1;  // clusters per iteration; only 1 is supported
  double max_grad_norm = 1.0;
  std::size_t validate_every = 10;
  std::size_t patience = 10;
  std::size_t max_iterations = 5000;
  double min_improvement = 1e-6;
  std::uint64_t seed = 1;
};

/// r(s_i) = (ROUGE-1 recall + ROUGE-2 recall) / 2 of each sentence scored
/// alone against the cluster's references (stemming on, no truncation).
std::vector<double> sentence_rouge_targets(const Cluster& cluster);

/// softmax(alpha * r)
std::vector<double> target_distribution(std::span<const double> r, double alpha);

/// Cross-entropy -sum_i R_i ln(sal_i) on the tape.
Var loss(const Var& salience, const std::vector<double>& targets);
double loss_value(std::span<const double> salience, std::span<const double> targets);

double entropy(std::span<const double> p);

/// One training or validation cluster: model input plus cached targets.
struct Example {
  std::string id;
  ClusterInput input;
  std::vector<double> targets;
};

Example make_example(const Cluster& cluster, const Vocabulary& vocab, const SentenceGraph* graph,
                     double alpha);

struct HistoryRow {
  std::size_t iteration = 0;
  double train_cost = 0.0;       // mean loss over iterations since the last validation
  double validation_cost = 0.0;  // mean validation loss
};

struct TrainingResult {
  ModelParams best;
  std::vector<HistoryRow> history;
  std::size_t best_iteration = 0;
  double best_validation_cost = 0.0;
  std::size_t iterations_run = 0;
  bool early_stopped = false;
};

/// Mean per-cluster loss; does not touch parameters.
double validate(const ModelParams& params, std::span<const Example> examples);

using ProgressFn = std::function<void(const HistoryRow&)>;

/// One cluster per iteration (epoch order reshuffled with the seed): forward,
/// loss, backward, clip, Adam. Validates every `validate_every` iterations,
/// keeps the parameters with the lowest validation cost and stops after
/// `patience` validations without an improvement of at least
/// `min_improvement`. Throws NumericError if a loss is not finite.
TrainingResult train(ModelParams initial, std::span<const Example> train_set,
                     std::span<const Example> validation_set, const TrainingConfig& config,
                     const ProgressFn& progress = {});

/// Tab-separated "iteration\ttrain_cost\tval_cost" with a header row.
std::string format_history(const std::vector<HistoryRow>& history);

}  // namespace gcnsum
