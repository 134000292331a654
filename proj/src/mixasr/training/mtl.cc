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

#include "mixasr/training/mtl.h"

#include <cmath>

#include "mixasr/error.h"

namespace mixasr {

MtlResult mtl_loss(const Model& model, const MixtureSample& sample, double lambda,
                   const HistorySource& history, GradStore* grads, double grad_scale) {
  require(lambda >= 0.0 && lambda <= 1.0, ErrorCode::kInvalidArgument,
          "interpolation weight must lie in [0, 1]");
  const std::size_t n = model.n_streams();
  require(sample.references.size() == n, ErrorCode::kInvalidArgument,
          "sample " + sample.id + " has " + std::to_string(sample.references.size()) +
              " references for a " + std::to_string(n) + "-stream model");
  const ParamStore& params = model.params();

  Encoder::Cache enc_cache;
  const StreamSet streams = model.encoder().encode(params, sample.mixture, enc_cache);

  std::vector<Tensor> logprobs;
  for (const auto& g : streams.streams) logprobs.push_back(model.ctc_logprobs(g));

  MtlResult out;
  out.ctc_matrix = Tensor::matrix(n, n);
  std::vector<std::vector<CtcResult>> pair(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t r = 0; r < n; ++r) {
      pair[s].push_back(ctc_loss(logprobs[s], sample.references[r]));
      out.ctc_matrix(s, r) = pair[s][r].nll;
    }
  }
  out.permutation = pit_assign(out.ctc_matrix);
  if (!std::isfinite(out.permutation.total)) {
    out.skipped = true;
    return out;
  }
  out.ctc = out.permutation.total;

  std::vector<AttentionDecoder::Run> runs;
  for (std::size_t s = 0; s < n; ++s) {
    const TokenSeq& ref = sample.references[out.permutation.assignment[s]];
    runs.push_back(model.decoder().forward(params, s, streams.streams[s], ref, history));
    out.att += runs.back().nll;
    TokenSeq fed;
    for (std::size_t k = 1; k < runs.back().steps.size(); ++k)
      fed.push_back(runs.back().steps[k].history);
    out.histories.push_back(std::move(fed));
  }
  out.loss = lambda * out.ctc + (1.0 - lambda) * out.att;

  if (grads) {
    std::vector<Tensor> dstreams;
    for (std::size_t s = 0; s < n; ++s) {
      const Tensor& g = streams.streams[s];
      Tensor dg = Tensor::matrix(g.rows(), g.cols());
      const Tensor& dctc = pair[s][out.permutation.assignment[s]].grad;
      Tensor dlogp = Tensor::matrix(dctc.rows(), dctc.cols());
      for (std::size_t i = 0; i < dctc.size(); ++i) dlogp[i] = grad_scale * lambda * dctc[i];
      model.ctc_backward(g, logprobs[s], dlogp, *grads, dg);
      model.decoder().backward(params, g, runs[s], grad_scale * (1.0 - lambda), *grads, dg);
      dstreams.push_back(std::move(dg));
    }
    model.encoder().backward(params, enc_cache, dstreams, *grads);
  }
  return out;
}

}  // namespace mixasr
