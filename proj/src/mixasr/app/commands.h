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
#include <functional>
#include <optional>
#include <string>

#include "mixasr/app/config.h"
#include "mixasr/decoding/scoring.h"

namespace mixasr {

using LogFn = std::function<void(const std::string&)>;

// Key/value record of a finished run, written atomically next to its outputs.
struct RunManifest {
  std::string command;
  std::string config_hash;
  std::vector<std::pair<std::string, std::string>> seeds;
  std::vector<std::pair<std::string, std::string>> artifacts;
  std::vector<std::pair<std::string, std::string>> metrics;

  std::string serialize() const;
  void write(const std::filesystem::path& path) const;
};

// Writes text to path via a temporary sibling and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

// Generates the corpus into out_dir. A non-empty out_dir is an error unless
// force is set, in which case it is cleared first.
void cmd_mix_data(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                  bool force);

// Trains on corpus_dir/{train,dev}; writes out_dir/{model.bin, lm.bin,
// metrics.tsv, config.txt, run_manifest.txt}. Returns the best epoch's record.
EpochRecord cmd_train(const ExperimentConfig& config, const std::filesystem::path& corpus_dir,
                      const std::filesystem::path& out_dir, const LogFn& log = {});

struct DecodeRequest {
  std::filesystem::path model;
  std::optional<std::filesystem::path> lm;
  std::filesystem::path split_dir;  // manifest.tsv + feature files
  std::filesystem::path output;
  std::optional<std::filesystem::path> attention_dir;
};

// One output line per (utterance, stream): id \t stream \t joint_logscore \t tokens.
void cmd_decode(const ExperimentConfig& config, const DecodeRequest& request,
                const LogFn& log = {});

// Scores a decode file against the references of a manifest.
EvalReport cmd_score(const std::filesystem::path& decodes, const std::filesystem::path& manifest,
                     const std::filesystem::path& vocab_file,
                     const std::filesystem::path& report,
                     std::optional<std::string> word_boundary = std::nullopt);

// Attention matrix dumps: CSV (one row per output token) and binary PGM
// scaled so the largest weight is white.
std::string attention_csv(const Tensor& weights);
Tensor parse_attention_csv(const std::string& text);
std::string attention_pgm(const Tensor& weights, std::size_t scale = 1);
void plot_attention(const std::filesystem::path& csv, const std::filesystem::path& pgm,
                    std::size_t scale);

}  // namespace mixasr
