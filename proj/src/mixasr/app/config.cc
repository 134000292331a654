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

#include "mixasr/app/config.h"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "mixasr/error.h"
#include "mixasr/util/keyvalue.h"

namespace mixasr {

namespace {

struct Field {
  const char* section;
  const char* key;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&)> set;
};

template <typename T>
Field uint_field(const char* section, const char* key, T ExperimentConfig::*group,
                 auto member) {
  return {section, key,
          [=](const ExperimentConfig& c) { return std::to_string((c.*group).*member); },
          [=](ExperimentConfig& c, const std::string& v) {
            using M = std::remove_reference_t<decltype((c.*group).*member)>;
            (c.*group).*member = static_cast<M>(parse_uint(v, std::string(section) + "." + key));
          }};
}

template <typename T>
Field real_field(const char* section, const char* key, T ExperimentConfig::*group,
                 double T::*member) {
  return {section, key,
          [=](const ExperimentConfig& c) { return format_real((c.*group).*member); },
          [=](ExperimentConfig& c, const std::string& v) {
            (c.*group).*member = parse_double(v, std::string(section) + "." + key);
          }};
}

template <typename T>
Field bool_field(const char* section, const char* key, T ExperimentConfig::*group,
                 bool T::*member) {
  return {section, key,
          [=](const ExperimentConfig& c) {
            return std::string((c.*group).*member ? "true" : "false");
          },
          [=](ExperimentConfig& c, const std::string& v) {
            (c.*group).*member = parse_bool(v, std::string(section) + "." + key);
          }};
}

const std::vector<Field>& fields() {
  using E = ExperimentConfig;
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back({"experiment", "version",
                 [](const E& c) { return std::to_string(c.version); },
                 [](E& c, const std::string& v) {
                   c.version = parse_uint(v, "experiment.version");
                 }});

    f.push_back(uint_field("data", "num_symbols", &E::data, &DataConfig::num_symbols));
    f.push_back(uint_field("data", "min_label_len", &E::data, &DataConfig::min_label_len));
    f.push_back(uint_field("data", "max_label_len", &E::data, &DataConfig::max_label_len));
    f.push_back(uint_field("data", "frames_per_token", &E::data, &DataConfig::frames_per_token));
    f.push_back(uint_field("data", "dim", &E::data, &DataConfig::dim));
    f.push_back(real_field("data", "noise_std", &E::data, &DataConfig::noise_std));
    f.push_back(real_field("data", "gain_min_db", &E::data, &DataConfig::gain_min_db));
    f.push_back(real_field("data", "gain_max_db", &E::data, &DataConfig::gain_max_db));
    f.push_back(uint_field("data", "n_train", &E::data, &DataConfig::n_train));
    f.push_back(uint_field("data", "n_dev", &E::data, &DataConfig::n_dev));
    f.push_back(uint_field("data", "n_eval", &E::data, &DataConfig::n_eval));
    f.push_back(uint_field("data", "seed", &E::data, &DataConfig::seed));

    f.push_back(uint_field("model", "n_streams", &E::encoder, &EncoderConfig::n_streams));
    f.push_back(uint_field("model", "enc_hidden", &E::encoder, &EncoderConfig::hidden));
    f.push_back(uint_field("model", "enc_projection", &E::encoder, &EncoderConfig::projection));
    f.push_back(uint_field("model", "subsample", &E::encoder, &EncoderConfig::subsample));
    f.push_back({"model", "attention",
                 [](const E& c) { return std::string(attention_mode_name(c.decoder.mode)); },
                 [](E& c, const std::string& v) { c.decoder.mode = parse_attention_mode(v); }});
    f.push_back({"model", "attention_query",
                 [](const E& c) { return std::string(attention_query_name(c.decoder.query)); },
                 [](E& c, const std::string& v) { c.decoder.query = parse_attention_query(v); }});
    f.push_back(uint_field("model", "attention_dim", &E::decoder, &DecoderConfig::attention_dim));
    f.push_back(uint_field("model", "conv_channels", &E::decoder, &DecoderConfig::conv_channels));
    f.push_back(uint_field("model", "conv_kernel", &E::decoder, &DecoderConfig::conv_kernel));
    f.push_back(uint_field("model", "dec_hidden", &E::decoder, &DecoderConfig::hidden));
    f.push_back(uint_field("model", "embed_dim", &E::decoder, &DecoderConfig::embed_dim));

    f.push_back(real_field("train", "lambda", &E::train, &TrainConfig::lambda));
    f.push_back({"train", "rho",
                 [](const E& c) { return format_real(c.train.adadelta.rho); },
                 [](E& c, const std::string& v) {
                   c.train.adadelta.rho = parse_double(v, "train.rho");
                 }});
    f.push_back({"train", "eps",
                 [](const E& c) { return format_real(c.train.adadelta.eps); },
                 [](E& c, const std::string& v) {
                   c.train.adadelta.eps = parse_double(v, "train.eps");
                 }});
    f.push_back(real_field("train", "init_range", &E::train, &TrainConfig::init_range));
    f.push_back(bool_field("train", "scheduled_sampling", &E::train,
                           &TrainConfig::scheduled_sampling));
    f.push_back(real_field("train", "ss_prob", &E::train, &TrainConfig::ss_prob));
    f.push_back(uint_field("train", "epochs", &E::train, &TrainConfig::epochs));
    f.push_back(uint_field("train", "batch_size", &E::train, &TrainConfig::batch_size));
    f.push_back(uint_field("train", "seed", &E::train, &TrainConfig::seed));
    f.push_back(real_field("train", "clip_norm", &E::train, &TrainConfig::clip_norm));
    f.push_back(uint_field("train", "threads", &E::train, &TrainConfig::threads));

    f.push_back({"lm", "enabled", [](const E& c) { return std::string(c.use_lm ? "true" : "false"); },
                 [](E& c, const std::string& v) { c.use_lm = parse_bool(v, "lm.enabled"); }});
    f.push_back(uint_field("lm", "embed_dim", &E::lm, &LmConfig::embed_dim));
    f.push_back(uint_field("lm", "hidden", &E::lm, &LmConfig::hidden));
    f.push_back(uint_field("lm", "epochs", &E::lm, &LmConfig::epochs));
    f.push_back(uint_field("lm", "batch_size", &E::lm, &LmConfig::batch_size));
    f.push_back(real_field("lm", "init_range", &E::lm, &LmConfig::init_range));
    f.push_back(uint_field("lm", "seed", &E::lm, &LmConfig::seed));

    f.push_back(uint_field("decode", "beam", &E::decode, &DecodeConfig::beam));
    f.push_back(real_field("decode", "ctc_weight", &E::decode, &DecodeConfig::ctc_weight));
    f.push_back(real_field("decode", "lm_weight", &E::decode, &DecodeConfig::lm_weight));
    f.push_back(real_field("decode", "max_len_ratio", &E::decode, &DecodeConfig::max_len_ratio));
    f.push_back({"decode", "ctc_scoring",
                 [](const E& c) { return std::string(ctc_scoring_name(c.decode.ctc_mode)); },
                 [](E& c, const std::string& v) { c.decode.ctc_mode = parse_ctc_scoring(v); }});
    return f;
  }();
  return table;
}

}  // namespace

void ExperimentConfig::validate() const {
  require(version == kExperimentConfigVersion, ErrorCode::kFormat,
          "unsupported config version " + std::to_string(version));
  data.validate();
  EncoderConfig enc = encoder;
  enc.input_dim = data.dim;
  enc.validate();
  decoder.validate();
  train.validate();
  decode.validate();
  require(lm.embed_dim > 0 && lm.hidden > 0 && lm.batch_size > 0, ErrorCode::kInvalidArgument,
          "lm sizes must be positive");
}

std::string ExperimentConfig::serialize() const {
  KeyValueDoc doc;
  for (const auto& f : fields()) doc.set(f.section, f.key, f.get(*this));
  return doc.serialize();
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  const KeyValueDoc doc = KeyValueDoc::parse(text);
  ExperimentConfig c;
  for (const auto& e : doc.entries()) {
    const Field* match = nullptr;
    for (const auto& f : fields())
      if (e.section == f.section && e.key == f.key) match = &f;
    require(match != nullptr, ErrorCode::kFormat,
            "unknown config key '" + (e.section.empty() ? e.key : e.section + "." + e.key) + "'");
    match->set(c, e.value);
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::kIo, "cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str());
}

ModelConfig ExperimentConfig::model_config(const Vocabulary& vocab) const {
  ModelConfig m;
  m.encoder = encoder;
  m.encoder.input_dim = data.dim;
  m.decoder = decoder;
  m.symbols = vocab.symbols();
  return m;
}

void set_config_value(ExperimentConfig& config, const std::string& dotted_key,
                      const std::string& value) {
  for (const auto& f : fields()) {
    if (dotted_key == std::string(f.section) + "." + f.key) {
      f.set(config, value);
      return;
    }
  }
  fail(ErrorCode::kInvalidArgument, "unknown config key '" + dotted_key + "'");
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& f : fields()) keys.push_back(std::string(f.section) + "." + f.key);
  return keys;
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : config.serialize()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

}  // namespace mixasr
