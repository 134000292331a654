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

#include "mixasr/training/model.h"

#include <sstream>

#include "mixasr/error.h"
#include "mixasr/numerics/ops.h"
#include "mixasr/numerics/param_io.h"
#include "mixasr/numerics/rng.h"

namespace mixasr {

namespace {

std::size_t need_uint(const KeyValueDoc& doc, const std::string& section, const std::string& key) {
  const auto v = doc.get(section, key);
  require(v.has_value(), ErrorCode::kFormat, "model config missing " + section + "." + key);
  return static_cast<std::size_t>(parse_uint(*v, section + "." + key));
}

std::string need_str(const KeyValueDoc& doc, const std::string& section, const std::string& key) {
  const auto v = doc.get(section, key);
  require(v.has_value(), ErrorCode::kFormat, "model config missing " + section + "." + key);
  return *v;
}

}  // namespace

void ModelConfig::to_doc(KeyValueDoc& doc) const {
  doc.set("model", "n_streams", std::to_string(encoder.n_streams));
  doc.set("model", "input_dim", std::to_string(encoder.input_dim));
  doc.set("model", "enc_hidden", std::to_string(encoder.hidden));
  doc.set("model", "enc_projection", std::to_string(encoder.projection));
  doc.set("model", "subsample", std::to_string(encoder.subsample));
  doc.set("model", "attention", attention_mode_name(decoder.mode));
  doc.set("model", "attention_query", attention_query_name(decoder.query));
  doc.set("model", "attention_dim", std::to_string(decoder.attention_dim));
  doc.set("model", "conv_channels", std::to_string(decoder.conv_channels));
  doc.set("model", "conv_kernel", std::to_string(decoder.conv_kernel));
  doc.set("model", "dec_hidden", std::to_string(decoder.hidden));
  doc.set("model", "embed_dim", std::to_string(decoder.embed_dim));
  std::string joined;
  for (std::size_t i = 0; i < symbols.size(); ++i) joined += (i ? " " : "") + symbols[i];
  doc.set("model", "symbols", joined);
}

ModelConfig ModelConfig::from_doc(const KeyValueDoc& doc) {
  ModelConfig c;
  c.encoder.n_streams = need_uint(doc, "model", "n_streams");
  c.encoder.input_dim = need_uint(doc, "model", "input_dim");
  c.encoder.hidden = need_uint(doc, "model", "enc_hidden");
  c.encoder.projection = need_uint(doc, "model", "enc_projection");
  c.encoder.subsample = need_uint(doc, "model", "subsample");
  c.decoder.mode = parse_attention_mode(need_str(doc, "model", "attention"));
  c.decoder.query = parse_attention_query(need_str(doc, "model", "attention_query"));
  c.decoder.attention_dim = need_uint(doc, "model", "attention_dim");
  c.decoder.conv_channels = need_uint(doc, "model", "conv_channels");
  c.decoder.conv_kernel = need_uint(doc, "model", "conv_kernel");
  c.decoder.hidden = need_uint(doc, "model", "dec_hidden");
  c.decoder.embed_dim = need_uint(doc, "model", "embed_dim");
  std::istringstream in(need_str(doc, "model", "symbols"));
  std::string s;
  while (in >> s) c.symbols.push_back(s);
  return c;
}

Model::Model(const ModelConfig& config) : config_(config), vocab_(config.symbols) {
  encoder_ = Encoder(params_, config_.encoder);
  ctc_head_ = Linear::create(params_, "ctc", config_.encoder.projection, vocab_.ctc_classes());
  decoder_ = AttentionDecoder(params_, config_.decoder, vocab_, config_.encoder.n_streams,
                              config_.encoder.projection);
}

Tensor Model::ctc_logprobs(const Tensor& stream) const {
  Tensor out = Tensor::matrix(stream.rows(), vocab_.ctc_classes());
  std::vector<double> logits(vocab_.ctc_classes());
  for (std::size_t t = 0; t < stream.rows(); ++t) {
    ctc_head_.forward(params_, stream.row(t), logits);
    log_softmax_into(logits, out.row(t));
  }
  return out;
}

void Model::ctc_backward(const Tensor& stream, const Tensor& logprobs, const Tensor& d_logprobs,
                         GradStore& grads, Tensor& d_stream) const {
  std::vector<double> dlogits(vocab_.ctc_classes());
  for (std::size_t t = 0; t < stream.rows(); ++t) {
    std::fill(dlogits.begin(), dlogits.end(), 0.0);
    log_softmax_backward(logprobs.row(t), d_logprobs.row(t), dlogits);
    ctc_head_.backward(params_, stream.row(t), dlogits, grads, d_stream.row(t));
  }
}

void Model::init_uniform(double range, std::uint64_t seed) {
  require(range >= 0.0, ErrorCode::kInvalidArgument, "init range must be >= 0");
  Rng rng(seed);
  for (ParamId id = 0; id < params_.size(); ++id)
    for (double& v : params_.value(id).values()) v = rng.uniform(-range, range);
  encoder_.init_forget_bias(params_, 1.0);
  decoder_.init_forget_bias(params_, 1.0);
}

void Model::save(const std::filesystem::path& path) const {
  KeyValueDoc doc;
  config_.to_doc(doc);
  write_params(path, doc.serialize(), params_);
}

Model Model::load(const std::filesystem::path& path) {
  ParamContainer c = read_params(path);
  Model m(ModelConfig::from_doc(KeyValueDoc::parse(c.metadata)));
  assign_params(m.params_, c.params);
  return m;
}

}  // namespace mixasr
