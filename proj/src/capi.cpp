// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 gcnsum developers

#include "gcnsum/gcnsum.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "gcnsum/corpus.hpp"
#include "gcnsum/error.hpp"
#include "gcnsum/graphs.hpp"
#include "gcnsum/model.hpp"
#include "gcnsum/pipeline.hpp"
#include "gcnsum/rouge.hpp"

struct gcnsum_config {
  gcnsum::RunConfig cfg;
};
struct gcnsum_corpus {
  std::vector<gcnsum::Cluster> clusters;
};
struct gcnsum_model {
  gcnsum::ModelParams params;
};

namespace {

thread_local std::string g_last_error;

gcnsum_status status_of(gcnsum::ErrorKind k) {
  using K = gcnsum::ErrorKind;
  switch (k) {
    case K::Dimension: return GCNSUM_E_DIMENSION;
    case K::InvalidArgument: return GCNSUM_E_INVALID_ARGUMENT;
    case K::Parse: return GCNSUM_E_PARSE;
    case K::Io: return GCNSUM_E_IO;
    case K::Contract: return GCNSUM_E_CONTRACT;
    case K::Numeric: return GCNSUM_E_NUMERIC;
  }
  return GCNSUM_E_INTERNAL;
}

// Runs f, translating exceptions into status codes.
template <typename F>
gcnsum_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return GCNSUM_OK;
  } catch (const gcnsum::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return GCNSUM_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GCNSUM_E_INTERNAL;
  }
}

gcnsum_status null_arg(const char* what) {
  g_last_error = std::string("null argument: ") + what;
  return GCNSUM_E_INVALID_ARGUMENT;
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

const std::vector<std::string>& key_list() {
  static const auto k = gcnsum::RunConfig::keys();
  return k;
}
const std::vector<std::string>& command_list() {
  static const auto c = gcnsum::command_names();
  return c;
}

}  // namespace

extern "C" {

const char* gcnsum_version(void) { return "0.1.0"; }

const char* gcnsum_status_name(gcnsum_status s) {
  switch (s) {
    case GCNSUM_OK: return "ok";
    case GCNSUM_E_DIMENSION: return "dimension";
    case GCNSUM_E_INVALID_ARGUMENT: return "invalid-argument";
    case GCNSUM_E_PARSE: return "parse";
    case GCNSUM_E_IO: return "io";
    case GCNSUM_E_CONTRACT: return "contract";
    case GCNSUM_E_NUMERIC: return "numeric";
    case GCNSUM_E_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* gcnsum_last_error(void) { return g_last_error.c_str(); }

void gcnsum_string_free(char* s) { std::free(s); }

gcnsum_status gcnsum_config_new(gcnsum_config** out) {
  if (!out) return null_arg("out");
  return guarded([&] { *out = new gcnsum_config(); });
}

void gcnsum_config_free(gcnsum_config* cfg) { delete cfg; }

gcnsum_status gcnsum_config_set(gcnsum_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return null_arg("cfg/key/value");
  return guarded([&] { cfg->cfg.set(key, value); });
}

gcnsum_status gcnsum_config_load_file(gcnsum_config* cfg, const char* path) {
  if (!cfg || !path) return null_arg("cfg/path");
  return guarded([&] { cfg->cfg.load_file(path); });
}

gcnsum_status gcnsum_config_to_text(const gcnsum_config* cfg, char** out) {
  if (!cfg || !out) return null_arg("cfg/out");
  return guarded([&] { *out = dup(cfg->cfg.to_text()); });
}

size_t gcnsum_config_key_count(void) { return key_list().size(); }
const char* gcnsum_config_key(size_t i) {
  return i < key_list().size() ? key_list()[i].c_str() : nullptr;
}

size_t gcnsum_command_count(void) { return command_list().size(); }
const char* gcnsum_command_name(size_t i) {
  return i < command_list().size() ? command_list()[i].c_str() : nullptr;
}

gcnsum_status gcnsum_run(const gcnsum_config* cfg, const char* command, char** message) {
  if (!cfg || !command) return null_arg("cfg/command");
  return guarded([&] {
    const auto r = gcnsum::run_command(command, cfg->cfg);
    if (message) *message = dup(r.message);
  });
}

gcnsum_status gcnsum_corpus_load(const char* path, gcnsum_corpus** out) {
  if (!path || !out) return null_arg("path/out");
  return guarded([&] {
    auto c = std::make_unique<gcnsum_corpus>();
    c->clusters = gcnsum::load_corpus(path);
    *out = c.release();
  });
}

void gcnsum_corpus_free(gcnsum_corpus* corpus) { delete corpus; }

size_t gcnsum_corpus_size(const gcnsum_corpus* corpus) {
  return corpus ? corpus->clusters.size() : 0;
}

const char* gcnsum_corpus_cluster_id(const gcnsum_corpus* corpus, size_t i) {
  if (!corpus || i >= corpus->clusters.size()) return nullptr;
  return corpus->clusters[i].id().c_str();
}

size_t gcnsum_corpus_cluster_sentences(const gcnsum_corpus* corpus, size_t i) {
  if (!corpus || i >= corpus->clusters.size()) return 0;
  return corpus->clusters[i].size();
}

gcnsum_status gcnsum_model_load(const char* checkpoint, gcnsum_model** out) {
  if (!checkpoint || !out) return null_arg("checkpoint/out");
  return guarded([&] {
    auto m = std::make_unique<gcnsum_model>();
    m->params = gcnsum::load_checkpoint(checkpoint);
    *out = m.release();
  });
}

void gcnsum_model_free(gcnsum_model* model) { delete model; }

gcnsum_status gcnsum_model_score(const gcnsum_model* model, const gcnsum_corpus* corpus, size_t i,
                                 const char* graph_json, double* out, size_t capacity) {
  if (!model || !corpus || !out) return null_arg("model/corpus/out");
  return guarded([&] {
    if (i >= corpus->clusters.size())
      throw gcnsum::InvalidArgument("cluster index " + std::to_string(i) + " out of range");
    const auto& cl = corpus->clusters[i];
    if (capacity < cl.size())
      throw gcnsum::DimensionError("output buffer holds " + std::to_string(capacity) +
                                   " values, cluster has " + std::to_string(cl.size()));
    std::vector<double> s;
    if (graph_json) {
      const auto g = gcnsum::graph_from_json(graph_json);
      s = gcnsum::predict(model->params, gcnsum::make_input(cl, model->params.vocab, &g));
    } else {
      s = gcnsum::predict(model->params, gcnsum::make_input(cl, model->params.vocab, nullptr));
    }
    std::copy(s.begin(), s.end(), out);
  });
}

gcnsum_status gcnsum_rouge_recall(const char* candidate, const char* const* references,
                                  size_t num_references, size_t n, int stemming, double* recall) {
  if (!candidate || (!references && num_references) || !recall)
    return null_arg("candidate/references/recall");
  return guarded([&] {
    std::vector<std::string> refs;
    for (size_t k = 0; k < num_references; ++k) {
      if (!references[k]) throw gcnsum::InvalidArgument("null reference string");
      refs.emplace_back(references[k]);
    }
    gcnsum::RougeConfig rc;
    rc.n = n;
    rc.stemming = stemming != 0;
    *recall = gcnsum::rouge_n_recall_text(candidate, refs, rc).recall;
  });
}

}  // extern "C"
