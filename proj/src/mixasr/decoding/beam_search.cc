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

#include "mixasr/decoding/beam_search.h"

#include <algorithm>
#include <cmath>

#include "mixasr/ctc/ctc.h"
#include "mixasr/error.h"
#include "mixasr/numerics/ops.h"

namespace mixasr {

namespace {

struct Hyp {
  TokenSeq tokens;  // symbols, plus a trailing eos once finished
  double att = 0.0;
  double ctc = 0.0;
  double lm = 0.0;
  double score = 0.0;
  StepState dec;
  CtcPrefixState ctc_state;
  TinyLm::State lm_state;
  std::vector<double> lm_next;
  std::vector<std::vector<double>> attention;
};

struct Candidate {
  double score;
  Token token;
  std::size_t parent;
  double att;
  double ctc;
  double lm;
  CtcPrefixState ctc_state;
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.token != b.token) return a.token < b.token;
  return a.parent < b.parent;
}

double weighted(double w, double x) { return w == 0.0 ? 0.0 : w * x; }

}  // namespace

const char* ctc_scoring_name(CtcScoring mode) {
  return mode == CtcScoring::kPrefix ? "prefix" : "rescore";
}

CtcScoring parse_ctc_scoring(const std::string& s) {
  if (s == "prefix") return CtcScoring::kPrefix;
  if (s == "rescore") return CtcScoring::kRescore;
  fail(ErrorCode::kInvalidArgument, "unknown ctc scoring mode '" + s + "' (prefix|rescore)");
}

void DecodeConfig::validate() const {
  require(beam >= 1, ErrorCode::kInvalidArgument, "beam must be >= 1");
  require(ctc_weight >= 0.0 && ctc_weight <= 1.0, ErrorCode::kInvalidArgument,
          "ctc weight must lie in [0, 1]");
  require(lm_weight >= 0.0 && std::isfinite(lm_weight), ErrorCode::kInvalidArgument,
          "lm weight must be finite and >= 0");
  require(max_len_ratio > 0.0 && std::isfinite(max_len_ratio), ErrorCode::kInvalidArgument,
          "max_len_ratio must be positive");
}

std::size_t DecodeConfig::max_symbols(std::size_t frames) const {
  return static_cast<std::size_t>(std::ceil(max_len_ratio * static_cast<double>(frames)));
}

double joint_score(const DecodeConfig& config, double att, double ctc, double lm) {
  return weighted(1.0 - config.ctc_weight, att) + weighted(config.ctc_weight, ctc) +
         weighted(config.lm_weight, lm);
}

StreamDecode beam_search_stream(const Model& model, std::size_t stream, const Tensor& enc,
                                const TinyLm* lm, const DecodeConfig& config) {
  config.validate();
  require(enc.rows() > 0, ErrorCode::kInvalidArgument, "beam search: empty encoder stream");
  const Vocabulary& vocab = model.vocab();
  const AttentionDecoder& dec = model.decoder();
  const ParamStore& params = model.params();
  const Token eos = vocab.eos();
  const bool use_lm = lm != nullptr && config.lm_weight != 0.0;
  if (use_lm)
    require(lm->vocab() == vocab, ErrorCode::kInvalidArgument,
            "beam search: language model vocabulary differs from the model's");
  const bool prefix_ctc = config.ctc_mode == CtcScoring::kPrefix && config.ctc_weight != 0.0;
  const double att_w = 1.0 - config.ctc_weight;

  const Tensor projected = dec.precompute(params, stream, enc);
  const Tensor ctc_lp = model.ctc_logprobs(enc);
  const std::size_t max_symbols = config.max_symbols(enc.rows());

  std::vector<Hyp> live(1);
  live[0].dec = dec.initial_state(enc.rows());
  live[0].dec.prev = vocab.sos();
  if (prefix_ctc) live[0].ctc_state = ctc_prefix_initial(ctc_lp);
  if (use_lm) {
    live[0].lm_state = lm->initial_state();
    live[0].lm_next = lm->lm_step(live[0].lm_state, vocab.sos());
  }
  std::vector<Hyp> finished;

  auto search_score = [&](double att, double ctc, double lmv) {
    return weighted(att_w, att) + (prefix_ctc ? weighted(config.ctc_weight, ctc) : 0.0) +
           (use_lm ? weighted(config.lm_weight, lmv) : 0.0);
  };

  while (!live.empty()) {
    std::vector<Candidate> cands;
    std::vector<StepState> advanced(live.size());
    for (std::size_t h = 0; h < live.size(); ++h) {
      const Hyp& hyp = live[h];
      advanced[h] = hyp.dec;
      const std::vector<double> logp =
          dec.advance(params, stream, enc, projected, advanced[h]);
      const bool at_limit = hyp.tokens.size() >= max_symbols;
      for (std::size_t cls = 0; cls < logp.size(); ++cls) {
        const Token tok = vocab.att_token(cls);
        if (at_limit && tok != eos) continue;
        Candidate c{0.0, tok, h, hyp.att + logp[cls], 0.0, hyp.lm, {}};
        if (prefix_ctc) {
          c.ctc_state = ctc_prefix_extend(ctc_lp, hyp.ctc_state, tok, eos);
          c.ctc = c.ctc_state.psi;
        }
        if (use_lm) c.lm += hyp.lm_next[cls];
        c.score = search_score(c.att, c.ctc, c.lm);
        cands.push_back(std::move(c));
      }
    }
    const std::size_t keep = std::min(config.beam, cands.size());
    std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(keep),
                      cands.end(), better);
    cands.resize(keep);

    std::vector<Hyp> next;
    for (auto& c : cands) {
      const Hyp& parent = live[c.parent];
      Hyp child;
      child.tokens = parent.tokens;
      child.tokens.push_back(c.token);
      child.att = c.att;
      child.ctc = c.ctc;
      child.lm = c.lm;
      child.score = c.score;
      child.dec = advanced[c.parent];
      child.dec.prev = c.token;
      child.ctc_state = std::move(c.ctc_state);
      child.attention = parent.attention;
      child.attention.push_back(advanced[c.parent].att.weights);
      if (c.token == eos) {
        finished.push_back(std::move(child));
        continue;
      }
      if (use_lm) {
        child.lm_state = parent.lm_state;
        child.lm_next = lm->lm_step(child.lm_state, c.token);
      }
      next.push_back(std::move(child));
    }
    live = std::move(next);
    // Every term is a log-probability increment <= 0, so no live hypothesis can
    // overtake a finished one that already scores at least as well.
    if (!finished.empty() && !live.empty()) {
      double best_finished = kLogZero;
      for (const auto& f : finished) best_finished = std::max(best_finished, f.score);
      if (best_finished >= live.front().score) break;
    }
  }
  require(!finished.empty(), ErrorCode::kInternal, "beam search finished no hypothesis");

  if (config.ctc_mode == CtcScoring::kRescore && config.ctc_weight != 0.0) {
    for (auto& f : finished) {
      const TokenSeq symbols(f.tokens.begin(), f.tokens.end() - 1);
      f.ctc = -ctc_nll(ctc_lp, symbols);
      f.score = joint_score(config, f.att, f.ctc, use_lm ? f.lm : 0.0);
    }
  }
  // Stable: equal scores keep the order in which hypotheses finished.
  const auto best = std::max_element(finished.begin(), finished.end(),
                                     [](const Hyp& a, const Hyp& b) { return a.score < b.score; });
  StreamDecode out;
  out.tokens.assign(best->tokens.begin(), best->tokens.end() - 1);
  out.score = best->score;
  out.att = best->att;
  out.ctc = best->ctc;
  out.lm = best->lm;
  out.attention = Tensor::matrix(best->attention.size(), enc.rows());
  for (std::size_t n = 0; n < best->attention.size(); ++n)
    std::copy(best->attention[n].begin(), best->attention[n].end(), out.attention.row(n).begin());
  return out;
}

std::vector<StreamDecode> beam_search(const Model& model, const StreamSet& streams,
                                      const TinyLm* lm, const DecodeConfig& config) {
  std::vector<StreamDecode> out;
  out.reserve(streams.streams.size());
  for (std::size_t s = 0; s < streams.streams.size(); ++s)
    out.push_back(beam_search_stream(model, s, streams.streams[s], lm, config));
  return out;
}

}  // namespace mixasr
