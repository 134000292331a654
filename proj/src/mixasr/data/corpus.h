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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mixasr/data/features.h"
#include "mixasr/data/vocab.h"

namespace mixasr {

struct Utterance {
  std::string id;
  FeatureSequence features;
  TokenSeq labels;
};

struct MixtureSample {
  std::string id;
  FeatureSequence mixture;
  // One label sequence per source, in generation order.
  std::vector<TokenSeq> references;
  double gain_db = 0.0;
  std::vector<std::string> source_ids;

  std::size_t num_reference_tokens() const;
};

struct DataConfig {
  std::size_t num_symbols = 8;
  std::size_t min_label_len = 3;
  std::size_t max_label_len = 8;
  std::size_t frames_per_token = 4;
  std::size_t dim = 8;
  double noise_std = 0.3;
  double gain_min_db = -3.0;
  double gain_max_db = 3.0;
  std::size_t n_train = 100;
  std::size_t n_dev = 10;
  std::size_t n_eval = 10;
  std::uint64_t seed = 1;

  void validate() const;
  friend bool operator==(const DataConfig&, const DataConfig&) = default;
};

struct CorpusSplit {
  Vocabulary vocab;
  std::vector<MixtureSample> train;
  std::vector<MixtureSample> dev;
  std::vector<MixtureSample> eval;
  std::uint64_t seed = 0;
};

// Unit-norm prototype frame for each symbol, rows in symbol order. Built by
// Gram-Schmidt over gaussian draws seeded by symbol index, so it depends only
// on (num_symbols, dim). Once num_symbols exceeds dim the extra rows are
// normalized but no longer orthogonal.
Tensor symbol_prototypes(std::size_t num_symbols, std::size_t dim);

// Each token emits frames_per_token copies of its prototype plus iid gaussian
// noise. Throws kInvalidArgument for non-symbol tokens or bad shapes.
Utterance synth_source(const Vocabulary& vocab, const TokenSeq& labels,
                       std::uint64_t seed, std::size_t frames_per_token,
                       std::size_t dim, double noise_std, std::string id = {});

// O[t] = a[t] + 10^(gain_db / 20) * b[t]; the shorter source is zero-padded.
MixtureSample mix(const Utterance& a, const Utterance& b, double gain_db,
                  std::string id = {});

CorpusSplit build_corpus(const DataConfig& config);

// Manifest: one line per mixture, `id \t gain_db \t labels_1 \t ... \t labels_S`.
std::string manifest_line(const Vocabulary& vocab, const MixtureSample& sample);
std::string format_real(double v);  // shortest round-trip decimal

// On-disk layout: <dir>/vocab.txt, <dir>/<split>/manifest.tsv, and one
// <dir>/<split>/<id>.ftrs feature file per mixture.
void write_corpus(const std::filesystem::path& dir, const CorpusSplit& corpus);
Vocabulary read_vocab(const std::filesystem::path& corpus_dir);
std::vector<MixtureSample> read_split(const std::filesystem::path& split_dir,
                                      const Vocabulary& vocab);

struct ManifestEntry {
  std::string id;
  double gain_db = 0.0;
  std::vector<TokenSeq> references;
};
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path,
                                         const Vocabulary& vocab);

}  // namespace mixasr
