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
#include <vector>

#include "mixasr/attdec/decoder.h"
#include "mixasr/data/vocab.h"
#include "mixasr/encoder/encoder.h"
#include "mixasr/util/keyvalue.h"

namespace mixasr {

struct ModelConfig {
  EncoderConfig encoder;
  DecoderConfig decoder;
  std::vector<std::string> symbols;  // vocabulary symbols, reserved tokens excluded

  void to_doc(KeyValueDoc& doc) const;
  static ModelConfig from_doc(const KeyValueDoc& doc);
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// The full recognizer: encoder, a CTC output layer shared by all streams, and
// the attention decoder. Layers hold parameter ids, so copies are deep.
class Model {
 public:
  Model() = default;
  explicit Model(const ModelConfig& config);

  const ModelConfig& config() const { return config_; }
  const Vocabulary& vocab() const { return vocab_; }
  std::size_t n_streams() const { return config_.encoder.n_streams; }

  ParamStore& params() { return params_; }
  const ParamStore& params() const { return params_; }
  const Encoder& encoder() const { return encoder_; }
  const Linear& ctc_head() const { return ctc_head_; }
  const AttentionDecoder& decoder() const { return decoder_; }

  // Per-frame CTC log-probabilities (T' x (V+1)) for one encoder stream.
  Tensor ctc_logprobs(const Tensor& stream) const;
  // Backward through the CTC head: d_logprobs -> accumulate into d_stream.
  void ctc_backward(const Tensor& stream, const Tensor& logprobs, const Tensor& d_logprobs,
                    GradStore& grads, Tensor& d_stream) const;

  // Uniform init in [-range, range] in registration order, then every LSTM
  // forget-gate bias is set to 1.0.
  void init_uniform(double range, std::uint64_t seed);

  void save(const std::filesystem::path& path) const;
  static Model load(const std::filesystem::path& path);

 private:
  ModelConfig config_;
  Vocabulary vocab_;
  ParamStore params_;
  Encoder encoder_;
  Linear ctc_head_;
  AttentionDecoder decoder_;
};

}  // namespace mixasr
