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

#include <vector>

#include "mixasr/encoder/blstmp.h"

namespace mixasr {

struct EncoderConfig {
  std::size_t n_streams = 2;
  std::size_t input_dim = 8;
  std::size_t hidden = 32;      // LSTM cells per direction
  std::size_t projection = 32;  // output width of every stage
  std::size_t subsample = 2;    // keep every subsample-th frame after the mix stage

  void validate() const;
  std::size_t output_frames(std::size_t input_frames) const {
    return (input_frames + subsample - 1) / subsample;
  }
  friend bool operator==(const EncoderConfig&, const EncoderConfig&) = default;
};

// Per-speaker encoder outputs, all T' x projection.
struct StreamSet {
  Tensor mixture;  // H, the mix-stage output after subsampling
  std::vector<Tensor> streams;
};

// Mixture stage shared over the input, one separation branch per stream, and
// a recognition stage shared by all streams.
class Encoder {
 public:
  struct Cache {
    Blstmp::Cache mix;
    std::size_t input_frames = 0;
    std::vector<Blstmp::Cache> sd;
    std::vector<Blstmp::Cache> rec;
  };

  Encoder() = default;
  Encoder(ParamStore& params, const EncoderConfig& config);

  const EncoderConfig& config() const { return config_; }
  const Blstmp& mix_layer() const { return mix_; }
  const Blstmp& sd_layer(std::size_t s) const { return sd_.at(s); }
  const Blstmp& rec_layer() const { return rec_; }

  Tensor encode_mix(const ParamStore& params, const Tensor& features, Cache& cache) const;
  Tensor encode_sd(const ParamStore& params, const Tensor& mixture, std::size_t stream,
                   Cache& cache) const;
  Tensor encode_rec(const ParamStore& params, const Tensor& separated, std::size_t stream,
                    Cache& cache) const;
  StreamSet encode(const ParamStore& params, const Tensor& features, Cache& cache) const;
  StreamSet encode(const ParamStore& params, const Tensor& features) const;

  // dstreams[s] is dL/dG^s. Accumulates all encoder parameter gradients.
  void backward(const ParamStore& params, const Cache& cache,
                const std::vector<Tensor>& dstreams, GradStore& grads) const;

  void init_forget_bias(ParamStore& params, double value) const;

 private:
  EncoderConfig config_;
  Blstmp mix_;
  std::vector<Blstmp> sd_;
  Blstmp rec_;
};

}  // namespace mixasr
