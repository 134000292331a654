// Copyright 2026 The mixasr Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MIXASR_MIXASR_H_
#define MIXASR_MIXASR_H_

#include <stddef.h>

#if defined(MIXASR_BUILDING_LIBRARY)
#define MIXASR_API __attribute__((visibility("default")))
#else
#define MIXASR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mixasr_status {
  MIXASR_OK = 0,
  MIXASR_INVALID_ARGUMENT = 1,
  MIXASR_IO = 2,
  MIXASR_FORMAT = 3,
  MIXASR_TRUNCATED = 4,
  MIXASR_DIMENSION_OVERFLOW = 5,
  MIXASR_SHAPE_MISMATCH = 6,
  MIXASR_NUMERIC = 7,
  MIXASR_INFEASIBLE = 8,
  MIXASR_INTERNAL = 9
} mixasr_status;

/* Opaque handles. */
typedef struct mixasr_config mixasr_config;
typedef struct mixasr_model mixasr_model;

/* Receives progress lines (metrics, warnings). */
typedef void (*mixasr_log_fn)(const char* line, void* user);

MIXASR_API const char* mixasr_version(void);

/* Message of the last failed call on this thread ("" if none). */
MIXASR_API const char* mixasr_last_error(void);
MIXASR_API const char* mixasr_status_name(mixasr_status status);

/* Process exit code for a status: 0 ok, 1 usage, 2 data error, 3 numeric failure. */
MIXASR_API int mixasr_exit_code(mixasr_status status);

/* Experiment configuration. */
MIXASR_API mixasr_status mixasr_config_new(mixasr_config** out);
MIXASR_API mixasr_status mixasr_config_parse(const char* text, mixasr_config** out);
MIXASR_API mixasr_status mixasr_config_load(const char* path, mixasr_config** out);
/* key is "section.key", e.g. "train.epochs". */
MIXASR_API mixasr_status mixasr_config_set(mixasr_config* config, const char* key,
                                           const char* value);
MIXASR_API mixasr_status mixasr_config_validate(const mixasr_config* config);
/* *out is heap-allocated; release with mixasr_string_free. */
MIXASR_API mixasr_status mixasr_config_serialize(const mixasr_config* config, char** out);
MIXASR_API void mixasr_config_free(mixasr_config* config);
MIXASR_API void mixasr_string_free(char* s);

/* Commands. */
MIXASR_API mixasr_status mixasr_mix_data(const mixasr_config* config, const char* out_dir,
                                         int force);
MIXASR_API mixasr_status mixasr_train(const mixasr_config* config, const char* corpus_dir,
                                      const char* out_dir, mixasr_log_fn log, void* user);
/* lm_path and attention_dir may be NULL. */
MIXASR_API mixasr_status mixasr_decode(const mixasr_config* config, const char* model_path,
                                       const char* lm_path, const char* split_dir,
                                       const char* output, const char* attention_dir,
                                       mixasr_log_fn log, void* user);
/* word_boundary may be NULL; cer/wer may be NULL. */
MIXASR_API mixasr_status mixasr_score(const char* decodes, const char* manifest,
                                      const char* vocab_file, const char* report,
                                      const char* word_boundary, double* cer, double* wer);
MIXASR_API mixasr_status mixasr_plot_attention(const char* csv, const char* pgm, size_t scale);

/* Trained model access. */
MIXASR_API mixasr_status mixasr_model_load(const char* path, mixasr_model** out);
MIXASR_API size_t mixasr_model_num_streams(const mixasr_model* model);
MIXASR_API size_t mixasr_model_num_symbols(const mixasr_model* model);
MIXASR_API size_t mixasr_model_num_parameters(const mixasr_model* model);
MIXASR_API void mixasr_model_free(mixasr_model* model);

#ifdef __cplusplus
}
#endif

#endif  // MIXASR_MIXASR_H_
