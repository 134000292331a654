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

#pragma once

#include <filesystem>
#include <string>

#include "mixasr/data/corpus.h"
#include "mixasr/decoding/beam_search.h"
#include "mixasr/decoding/lm.h"
#include "mixasr/training/model.h"
#include "mixasr/training/trainer.h"

namespace mixasr {

inline constexpr std::uint64_t kExperimentConfigVersion = 1;

// Everything an experiment needs, serialized as sectioned `key = value` text:
//   [experiment] version
//   [data]       corpus generation
//   [model]      encoder/decoder sizes (input dim and symbols come from the corpus)
//   [train]      objective and optimizer
//   [lm]         shallow-fusion language model
//   [decode]     beam search
// Unknown sections or keys are rejected; missing keys keep their defaults.
struct ExperimentConfig {
  std::uint64_t version = kExperimentConfigVersion;
  DataConfig data;
  EncoderConfig encoder;
  DecoderConfig decoder;
  TrainConfig train;
  bool use_lm = true;
  LmConfig lm;
  DecodeConfig decode;

  void validate() const;
  std::string serialize() const;
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::filesystem::path& path);

  ModelConfig model_config(const Vocabulary& vocab) const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Sets one value by "section.key" (same rules as parse, no validation).
void set_config_value(ExperimentConfig& config, const std::string& dotted_key,
                      const std::string& value);
std::vector<std::string> config_keys();

// FNV-1a 64 of the serialized config, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

}  // namespace mixasr
