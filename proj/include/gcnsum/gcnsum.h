/* SPDX-License-Identifier: Apache-2.0 */
/* Copyright (C) 2026 gcnsum developers */

/* Stable C interface to the gcnsum library. Every function returns a status
 * code; on failure gcnsum_last_error() describes the problem (per thread).
 * Strings returned through char** must be released with gcnsum_string_free. */

#ifndef GCNSUM_H
#define GCNSUM_H

#include <stddef.h>

#if defined(GCNSUM_BUILDING_LIBRARY)
#define GCNSUM_API __attribute__((visibility("default")))
#else
#define GCNSUM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gcnsum_status {
  GCNSUM_OK = 0,
  GCNSUM_E_DIMENSION = 1,
  GCNSUM_E_INVALID_ARGUMENT = 2,
  GCNSUM_E_PARSE = 3,
  GCNSUM_E_IO = 4,
  GCNSUM_E_CONTRACT = 5,
  GCNSUM_E_NUMERIC = 6,
  GCNSUM_E_INTERNAL = 7
} gcnsum_status;

typedef struct gcnsum_config gcnsum_config;
typedef struct gcnsum_corpus gcnsum_corpus;
typedef struct gcnsum_model gcnsum_model;

GCNSUM_API const char* gcnsum_version(void);
/* Short lowercase name for a status ("dimension", "io", ...). */
GCNSUM_API const char* gcnsum_status_name(gcnsum_status status);
/* Message of the last failed call on this thread; "" if none. */
GCNSUM_API const char* gcnsum_last_error(void);
GCNSUM_API void gcnsum_string_free(char* s);

/* --- run configuration and commands --- */
GCNSUM_API gcnsum_status gcnsum_config_new(gcnsum_config** out);
GCNSUM_API void gcnsum_config_free(gcnsum_config* cfg);
GCNSUM_API gcnsum_status gcnsum_config_set(gcnsum_config* cfg, const char* key, const char* value);
GCNSUM_API gcnsum_status gcnsum_config_load_file(gcnsum_config* cfg, const char* path);
GCNSUM_API gcnsum_status gcnsum_config_to_text(const gcnsum_config* cfg, char** out);
GCNSUM_API size_t gcnsum_config_key_count(void);
GCNSUM_API const char* gcnsum_config_key(size_t i);

GCNSUM_API size_t gcnsum_command_count(void);
GCNSUM_API const char* gcnsum_command_name(size_t i);
/* Runs a subcommand; *message (optional) receives its stdout text. */
GCNSUM_API gcnsum_status gcnsum_run(const gcnsum_config* cfg, const char* command, char** message);

/* --- corpus --- */
GCNSUM_API gcnsum_status gcnsum_corpus_load(const char* path, gcnsum_corpus** out);
GCNSUM_API void gcnsum_corpus_free(gcnsum_corpus* corpus);
GCNSUM_API size_t gcnsum_corpus_size(const gcnsum_corpus* corpus);
GCNSUM_API const char* gcnsum_corpus_cluster_id(const gcnsum_corpus* corpus, size_t i);
GCNSUM_API size_t gcnsum_corpus_cluster_sentences(const gcnsum_corpus* corpus, size_t i);

/* --- trained model --- */
GCNSUM_API gcnsum_status gcnsum_model_load(const char* checkpoint, gcnsum_model** out);
GCNSUM_API void gcnsum_model_free(gcnsum_model* model);
/* Salience of every sentence of cluster i. graph_json may be NULL only for
 * models without GCN layers. out must hold the cluster's sentence count. */
GCNSUM_API gcnsum_status gcnsum_model_score(const gcnsum_model* model, const gcnsum_corpus* corpus,
                                            size_t i, const char* graph_json, double* out,
                                            size_t capacity);

/* --- evaluation --- */
/* ROUGE-N recall (0..1) of candidate against references, stemmed if
 * stemming != 0, without truncation. */
GCNSUM_API gcnsum_status gcnsum_rouge_recall(const char* candidate, const char* const* references,
                                             size_t num_references, size_t n, int stemming,
                                             double* recall);

#ifdef __cplusplus
}
#endif

#endif /* GCNSUM_H */
