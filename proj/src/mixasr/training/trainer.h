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

#include <functional>
#include <string>
#include <vector>

#include "mixasr/data/corpus.h"
#include "mixasr/training/adadelta.h"
#include "mixasr/training/model.h"

namespace mixasr {

struct TrainConfig {
  double lambda = 0.2;  // CTC weight in the multi-task loss
  AdaDeltaConfig adadelta;
  double init_range = 0.1;
  // When set, decoder history goes through the Bernoulli(ss_prob) policy even
  // at ss_prob == 0; otherwise plain teacher forcing.
  bool scheduled_sampling = true;
  double ss_prob = 0.2;
  std::size_t epochs = 40;
  std::size_t batch_size = 10;
  std::uint64_t seed = 1;
  double clip_norm = 5.0;  // global gradient norm; <= 0 disables clipping
  std::size_t threads = 1;

  void validate() const;
  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;  // per reference token
  double dev_loss = 0.0;    // per reference token, teacher forced
  double dev_ctc_cer = 0.0;
  double wallclock_s = 0.0;
  std::size_t skipped = 0;   // training samples with no CTC-feasible assignment
  std::size_t rejected = 0;  // optimizer steps refused for non-finite gradients
};

// `epoch \t train_loss \t dev_loss \t dev_ctc_cer \t wallclock_s`
std::string format_epoch_record(const EpochRecord& r);
std::string epoch_record_header();

struct TrainHooks {
  std::function<void(const EpochRecord&)> on_epoch;
  std::function<void(const std::string&)> warn;
};

struct TrainResult {
  Model best;  // parameters at the lowest dev loss
  Model last;
  std::size_t best_epoch = 0;
  double initial_dev_loss = 0.0;
  std::vector<EpochRecord> log;
};

// Teacher-forced multi-task loss per reference token over `samples`
// (samples without a feasible assignment are left out).
double evaluate_loss(const Model& model, const std::vector<MixtureSample>& samples,
                     double lambda);

// Permutation-minimum CER of greedy CTC output.
double greedy_ctc_cer(const Model& model, const std::vector<MixtureSample>& samples);

// Seeded epoch loop: shuffle, per-token-normalized minibatch gradients,
// global-norm clipping, AdaDelta. Throws kNumeric when the dev loss stops
// being finite.
TrainResult train(const ModelConfig& model_config, const TrainConfig& config,
                  const std::vector<MixtureSample>& train_set,
                  const std::vector<MixtureSample>& dev_set, const TrainHooks& hooks = {});

}  // namespace mixasr
