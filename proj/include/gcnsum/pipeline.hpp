// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 gcnsum developers

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace gcnsum {

/// Fully resolved settings for one command. Keys accepted by set() are the
/// long flag names without the leading dashes (e.g. "graph-type").
struct RunConfig {
  std::string graph_type = "pdg";  // cosine | adg | pdg | none
  std::string corpus;
  std::string validation_corpus;
  std::string graphs_dir;
  std::string embeddings;
  std::string checkpoint;
  std::string personalization;
  std::string summaries_dir;
  std::string out;
  std::string system = "gcnsum";
  std::uint64_t seed = 1;
  std::size_t limit_words = 100;
  std::size_t limit_bytes = 0;  // nonzero: byte limit wins over words
  double alpha = 40.0;
  double lr = 1e-3;
  double max_grad_norm = 1.0;
  std::size_t layers = 3;
  std::size_t hidden_dim = 300;
  std::size_t embed_dim = 300;
  std::size_t max_iterations = 5000;
  std::size_t patience = 10;
  std::size_t validate_every = 10;
  double cosine_threshold = 0.2;
  std::size_t bootstrap = 1000;
  std::size_t synthetic_clusters = 5;
  bool verbose = false;

  /// Throws InvalidArgument for unknown keys or unparsable values.
  void set(const std::string& key, const std::string& value);
  /// "key = value" lines; '#' starts a comment.
  void load_file(const std::filesystem::path& path);
  /// Every key with its current value, in the set() syntax.
  std::string to_text() const;
  static std::vector<std::string> keys();
};

/// Output of a command: text meant for stdout and the files written.
struct CommandResult {
  std::string message;
  std::vector<std::string> files;
};

CommandResult cmd_build_graph(const RunConfig& config);
CommandResult cmd_fit_personalization(const RunConfig& config);
CommandResult cmd_train(const RunConfig& config);
CommandResult cmd_summarize(const RunConfig& config);
CommandResult cmd_evaluate(const RunConfig& config);
CommandResult cmd_stats(const RunConfig& config);
CommandResult cmd_make_synthetic(const RunConfig& config);

/// Dispatches by subcommand name ("build-graph", "train", ...).
CommandResult run_command(const std::string& name, const RunConfig& config);
std::vector<std::string> command_names();

}  // namespace gcnsum
