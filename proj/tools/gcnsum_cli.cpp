// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 gcnsum developers
//
// Command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gcnsum/gcnsum.h"

namespace {

const std::map<std::string, std::string> kHelp = {
    {"graph-type", "cosine | adg | pdg | none"},
    {"corpus", "corpus file (JSON lines)"},
    {"validation-corpus", "validation corpus for early stopping"},
    {"graphs-dir", "directory holding <cluster-id>.json graphs"},
    {"embeddings", "word2vec text embeddings (optional)"},
    {"checkpoint", "model checkpoint path"},
    {"personalization", "personalization model (JSON)"},
    {"summaries-dir", "directory of <cluster-id>.txt summaries"},
    {"out", "output directory (file for make-synthetic)"},
    {"system", "system name in evaluation reports"},
    {"seed", "random seed"},
    {"limit-words", "summary length limit in words"},
    {"limit-bytes", "summary length limit in bytes (overrides words)"},
    {"alpha", "target temperature"},
    {"lr", "Adam learning rate"},
    {"max-grad-norm", "global gradient norm clip"},
    {"layers", "number of GCN layers"},
    {"hidden-dim", "GRU/GCN width"},
    {"embed-dim", "word embedding width"},
    {"max-iterations", "training iteration cap"},
    {"patience", "validations without improvement before stopping"},
    {"validate-every", "iterations between validations"},
    {"cosine-threshold", "edge threshold for cosine graphs"},
    {"bootstrap", "bootstrap samples for the R-1 interval (0 disables)"},
    {"clusters", "number of synthetic clusters"},
};

int fail(gcnsum_status st) {
  std::fprintf(stderr, "gcnsum: error[%s]: %s\n", gcnsum_status_name(st), gcnsum_last_error());
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gcnsum: graph-based multi-document extractive summarization"};
  app.require_subcommand(1);
  app.set_version_flag("--version", gcnsum_version());

  std::map<std::string, std::string> values;
  std::string config_file;
  bool verbose = false;

  std::vector<std::string> keys;
  for (size_t i = 0; i < gcnsum_config_key_count(); ++i) keys.emplace_back(gcnsum_config_key(i));

  std::map<CLI::App*, std::string> commands;
  for (size_t c = 0; c < gcnsum_command_count(); ++c) {
    const std::string name = gcnsum_command_name(c);
    CLI::App* sub = app.add_subcommand(name);
    commands[sub] = name;
    sub->add_option("--config", config_file, "key = value config file; flags override it");
    sub->add_flag("-v,--verbose", verbose, "verbose output");
    for (const auto& k : keys) {
      if (k == "verbose") continue;
      const auto h = kHelp.find(k);
      sub->add_option("--" + k, values[k], h == kHelp.end() ? "" : h->second);
    }
  }

  CLI11_PARSE(app, argc, argv);

  CLI::App* chosen = app.get_subcommands().front();
  gcnsum_config* cfg = nullptr;
  gcnsum_status st = gcnsum_config_new(&cfg);
  if (st != GCNSUM_OK) return fail(st);

  auto run = [&]() -> gcnsum_status {
    if (!config_file.empty()) {
      if (auto s = gcnsum_config_load_file(cfg, config_file.c_str()); s != GCNSUM_OK) return s;
    }
    for (const auto& k : keys) {
      if (k == "verbose" || chosen->count("--" + k) == 0) continue;
      if (auto s = gcnsum_config_set(cfg, k.c_str(), values[k].c_str()); s != GCNSUM_OK) return s;
    }
    if (verbose) {
      if (auto s = gcnsum_config_set(cfg, "verbose", "true"); s != GCNSUM_OK) return s;
    }
    char* message = nullptr;
    const gcnsum_status s = gcnsum_run(cfg, commands[chosen].c_str(), &message);
    if (s == GCNSUM_OK && message) std::fputs(message, stdout);
    gcnsum_string_free(message);
    return s;
  };
  st = run();
  gcnsum_config_free(cfg);
  return st == GCNSUM_OK ? 0 : fail(st);
}
