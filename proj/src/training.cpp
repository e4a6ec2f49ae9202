// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 gcnsum developers

#include "gcnsum/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "gcnsum/error.hpp"
#include "gcnsum/optim.hpp"
#include "gcnsum/rouge.hpp"

namespace gcnsum {

std::vector<double> sentence_rouge_targets(const Cluster& cluster) {
  if (!cluster.has_references())
    throw ContractError("cluster '" + cluster.id() + "' has no reference summaries");
  std::vector<double> r;
  r.reserve(cluster.size());
  RougeConfig r1{1, true, TruncationUnit::None, 0};
  RougeConfig r2{2, true, TruncationUnit::None, 0};
  for (const auto& s : cluster.sentences()) {
    const double a = rouge_n_recall(s.tokens, cluster.reference_tokens(), r1).recall;
    const double b = rouge_n_recall(s.tokens, cluster.reference_tokens(), r2).recall;
    r.push_back((a + b) / 2.0);
  }
  return r;
}

std::vector<double> target_distribution(std::span<const double> r, double alpha) {
  if (!(alpha > 0.0)) throw InvalidArgument("target_distribution: alpha must be positive");
  if (r.empty()) throw InvalidArgument("target_distribution: empty input");
  std::vector<double> out(r.size());
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : r) mx = std::max(mx, alpha * v);
  double z = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    out[i] = std::exp(alpha * r[i] - mx);
    z += out[i];
  }
  for (auto& v : out) v /= z;
  return out;
}

Var loss(const Var& salience, const std::vector<double>& targets) {
  if (salience.value().numel() != targets.size())
    throw DimensionError("loss: " + std::to_string(salience.value().numel()) + " scores vs " +
                         std::to_string(targets.size()) + " targets");
  Tape& t = *salience.tape();
  const Var r = t.constant(Tensor({targets.size()}, targets));
  return scale(sum(mul(r, log(salience))), -1.0);
}

double loss_value(std::span<const double> salience, std::span<const double> targets) {
  if (salience.size() != targets.size()) throw DimensionError("loss: length mismatch");
  double l = 0.0;
  for (std::size_t i = 0; i < salience.size(); ++i) l -= targets[i] * std::log(salience[i]);
  return l;
}

double entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

Example make_example(const Cluster& cluster, const Vocabulary& vocab, const SentenceGraph* graph,
                     double alpha) {
  return Example{cluster.id(), make_input(cluster, vocab, graph),
                 target_distribution(sentence_rouge_targets(cluster), alpha)};
}

double validate(const ModelParams& params, std::span<const Example> examples) {
  if (examples.empty()) throw InvalidArgument("validate: no examples");
  double total = 0.0;
  for (const auto& ex : examples) total += loss_value(predict(params, ex.input), ex.targets);
  return total / static_cast<double>(examples.size());
}

TrainingResult train(ModelParams initial, std::span<const Example> train_set,
                     std::span<const Example> validation_set, const TrainingConfig& config,
                     const ProgressFn& progress) {
  if (train_set.empty() || validation_set.empty())
    throw InvalidArgument("train: training and validation sets must be non-empty");
  if (config.batch_size != 1) throw InvalidArgument("train: only batch size 1 is supported");
  if (config.patience < 1 || config.validate_every < 1)
    throw InvalidArgument("train: patience and validate_every must be >= 1");
  if (!(config.alpha > 0.0)) throw InvalidArgument("train: alpha must be positive");

  TrainingResult result;
  ModelParams params = std::move(initial);
  auto plist = params.all();
  AdamState adam(plist, config.learning_rate);
  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  std::size_t cursor = order.size();

  double best = std::numeric_limits<double>::infinity();
  std::size_t stale = 0;
  double window_loss = 0.0;
  std::size_t window = 0;
  result.best = params;

  for (std::size_t it = 1; it <= config.max_iterations; ++it) {
    if (cursor == order.size()) {
      std::shuffle(order.begin(), order.end(), rng);
      cursor = 0;
    }
    const Example& ex = train_set[order[cursor++]];
    {
      Tape tape;
      const BoundModel m = bind(tape, params);
      const Var l = loss(forward(m, ex.input, params.config), ex.targets);
      const double lv = l.value().item();
      if (!std::isfinite(lv))
        throw NumericError("training diverged: non-finite loss at iteration " +
                           std::to_string(it) + " on cluster '" + ex.id + "'");
      tape.backward(l);
      window_loss += lv;
      ++window;
    }
    clip_global_norm(plist, config.max_grad_norm);
    adam.step(plist);
    result.iterations_run = it;

    if (it % config.validate_every == 0) {
      const double val = validate(params, validation_set);
      if (!std::isfinite(val))
        throw NumericError("validation loss is not finite at iteration " + std::to_string(it));
      HistoryRow row{it, window_loss / static_cast<double>(window), val};
      window_loss = 0.0;
      window = 0;
      result.history.push_back(row);
      if (progress) progress(row);
      if (val < best - config.min_improvement) {
        best = val;
        stale = 0;
        result.best = params;
        result.best_iteration = it;
        result.best_validation_cost = val;
      } else if (++stale >= config.patience) {
        result.early_stopped = true;
        break;
      }
    }
  }
  if (result.history.empty()) {
    // Fewer iterations than one validation period.
    result.best = params;
    result.best_iteration = result.iterations_run;
    result.best_validation_cost = validate(params, validation_set);
  }
  return result;
}

std::string format_history(const std::vector<HistoryRow>& history) {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed;
  os << "iteration\ttrain_cost\tval_cost\n";
  for (const auto& r : history)
    os << r.iteration << '\t' << r.train_cost << '\t' << r.validation_cost << '\n';
  return os.str();
}

}  // namespace gcnsum
