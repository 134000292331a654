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

#include "mixasr/mixasr.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "mixasr/app/commands.h"
#include "mixasr/app/config.h"
#include "mixasr/error.h"
#include "mixasr/training/model.h"

struct mixasr_config {
  mixasr::ExperimentConfig value;
};

struct mixasr_model {
  mixasr::Model value;
};

namespace {

thread_local std::string g_last_error;

mixasr_status set_error(mixasr_status status, const std::string& msg) {
  g_last_error = msg;
  return status;
}

template <typename F>
mixasr_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return MIXASR_OK;
  } catch (const mixasr::Error& e) {
    return set_error(static_cast<mixasr_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(MIXASR_INTERNAL, "out of memory");
  } catch (const std::filesystem::filesystem_error& e) {
    return set_error(MIXASR_IO, e.what());
  } catch (const std::exception& e) {
    return set_error(MIXASR_INTERNAL, e.what());
  }
}

mixasr_status need(const void* p, const char* what) {
  if (p != nullptr) return MIXASR_OK;
  return set_error(MIXASR_INVALID_ARGUMENT, std::string(what) + " is NULL");
}

mixasr::LogFn make_log(mixasr_log_fn log, void* user) {
  if (log == nullptr) return {};
  return [log, user](const std::string& line) { log(line.c_str(), user); };
}

}  // namespace

extern "C" {

const char* mixasr_version(void) { return "1.0.0"; }

const char* mixasr_last_error(void) { return g_last_error.c_str(); }

const char* mixasr_status_name(mixasr_status status) {
  return mixasr::error_code_name(static_cast<mixasr::ErrorCode>(status));
}

int mixasr_exit_code(mixasr_status status) {
  switch (status) {
    case MIXASR_OK: return 0;
    case MIXASR_INVALID_ARGUMENT: return 1;
    case MIXASR_NUMERIC: return 3;
    default: return 2;
  }
}

mixasr_status mixasr_config_new(mixasr_config** out) {
  if (auto s = need(out, "out")) return s;
  return guarded([&] { *out = new mixasr_config{}; });
}

mixasr_status mixasr_config_parse(const char* text, mixasr_config** out) {
  if (auto s = need(text, "text")) return s;
  if (auto s = need(out, "out")) return s;
  return guarded([&] { *out = new mixasr_config{mixasr::ExperimentConfig::parse(text)}; });
}

mixasr_status mixasr_config_load(const char* path, mixasr_config** out) {
  if (auto s = need(path, "path")) return s;
  if (auto s = need(out, "out")) return s;
  return guarded([&] { *out = new mixasr_config{mixasr::ExperimentConfig::load(path)}; });
}

mixasr_status mixasr_config_set(mixasr_config* config, const char* key, const char* value) {
  if (auto s = need(config, "config")) return s;
  if (auto s = need(key, "key")) return s;
  if (auto s = need(value, "value")) return s;
  return guarded([&] { mixasr::set_config_value(config->value, key, value); });
}

mixasr_status mixasr_config_validate(const mixasr_config* config) {
  if (auto s = need(config, "config")) return s;
  return guarded([&] { config->value.validate(); });
}

mixasr_status mixasr_config_serialize(const mixasr_config* config, char** out) {
  if (auto s = need(config, "config")) return s;
  if (auto s = need(out, "out")) return s;
  return guarded([&] {
    const std::string text = config->value.serialize();
    char* buf = static_cast<char*>(std::malloc(text.size() + 1));
    if (buf == nullptr) throw std::bad_alloc();
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
  });
}

void mixasr_config_free(mixasr_config* config) { delete config; }

void mixasr_string_free(char* s) { std::free(s); }

mixasr_status mixasr_mix_data(const mixasr_config* config, const char* out_dir, int force) {
  if (auto s = need(config, "config")) return s;
  if (auto s = need(out_dir, "out_dir")) return s;
  return guarded([&] { mixasr::cmd_mix_data(config->value, out_dir, force != 0); });
}

mixasr_status mixasr_train(const mixasr_config* config, const char* corpus_dir,
                           const char* out_dir, mixasr_log_fn log, void* user) {
  if (auto s = need(config, "config")) return s;
  if (auto s = need(corpus_dir, "corpus_dir")) return s;
  if (auto s = need(out_dir, "out_dir")) return s;
  return guarded(
      [&] { mixasr::cmd_train(config->value, corpus_dir, out_dir, make_log(log, user)); });
}

mixasr_status mixasr_decode(const mixasr_config* config, const char* model_path,
                            const char* lm_path, const char* split_dir, const char* output,
                            const char* attention_dir, mixasr_log_fn log, void* user) {
  if (auto s = need(config, "config")) return s;
  if (auto s = need(model_path, "model_path")) return s;
  if (auto s = need(split_dir, "split_dir")) return s;
  if (auto s = need(output, "output")) return s;
  return guarded([&] {
    mixasr::DecodeRequest req;
    req.model = model_path;
    if (lm_path) req.lm = lm_path;
    req.split_dir = split_dir;
    req.output = output;
    if (attention_dir) req.attention_dir = attention_dir;
    mixasr::cmd_decode(config->value, req, make_log(log, user));
  });
}

mixasr_status mixasr_score(const char* decodes, const char* manifest, const char* vocab_file,
                           const char* report, const char* word_boundary, double* cer,
                           double* wer) {
  if (auto s = need(decodes, "decodes")) return s;
  if (auto s = need(manifest, "manifest")) return s;
  if (auto s = need(vocab_file, "vocab_file")) return s;
  if (auto s = need(report, "report")) return s;
  return guarded([&] {
    std::optional<std::string> boundary;
    if (word_boundary) boundary = word_boundary;
    const mixasr::EvalReport r = mixasr::cmd_score(decodes, manifest, vocab_file, report, boundary);
    if (cer) *cer = r.cer();
    if (wer) *wer = r.wer();
  });
}

mixasr_status mixasr_plot_attention(const char* csv, const char* pgm, size_t scale) {
  if (auto s = need(csv, "csv")) return s;
  if (auto s = need(pgm, "pgm")) return s;
  return guarded([&] { mixasr::plot_attention(csv, pgm, scale); });
}

mixasr_status mixasr_model_load(const char* path, mixasr_model** out) {
  if (auto s = need(path, "path")) return s;
  if (auto s = need(out, "out")) return s;
  return guarded([&] { *out = new mixasr_model{mixasr::Model::load(path)}; });
}

size_t mixasr_model_num_streams(const mixasr_model* model) {
  return model ? model->value.n_streams() : 0;
}

size_t mixasr_model_num_symbols(const mixasr_model* model) {
  return model ? model->value.vocab().num_symbols() : 0;
}

size_t mixasr_model_num_parameters(const mixasr_model* model) {
  return model ? model->value.params().num_scalars() : 0;
}

void mixasr_model_free(mixasr_model* model) { delete model; }

}  // extern "C"
