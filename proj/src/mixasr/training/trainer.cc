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

#include "mixasr/training/trainer.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "mixasr/ctc/ctc.h"
#include "mixasr/data/corpus.h"
#include "mixasr/decoding/scoring.h"
#include "mixasr/error.h"
#include "mixasr/training/mtl.h"

namespace mixasr {

namespace {

struct BatchPart {
  GradStore grads;
  double loss = 0.0;
  std::size_t tokens = 0;
  std::size_t skipped = 0;
  std::vector<std::string> skipped_ids;
};

void run_part(const Model& model, const TrainConfig& config,
              const std::vector<MixtureSample>& data, const std::vector<std::size_t>& order,
              std::size_t begin, std::size_t end, std::size_t epoch, BatchPart& part) {
  for (std::size_t i = begin; i < end; ++i) {
    const std::size_t idx = order[i];
    const MixtureSample& sample = data[idx];
    Rng rng(derive_seed(config.seed, {2, epoch, idx}));
    const HistorySource history =
        config.scheduled_sampling ? HistorySource::scheduled({config.ss_prob, &rng})
                                  : HistorySource::teacher_forcing();
    const MtlResult r = mtl_loss(model, sample, config.lambda, history, &part.grads);
    if (r.skipped) {
      ++part.skipped;
      part.skipped_ids.push_back(sample.id);
      continue;
    }
    part.loss += r.loss;
    part.tokens += sample.num_reference_tokens();
  }
}

}  // namespace

void TrainConfig::validate() const {
  require(lambda >= 0.0 && lambda <= 1.0, ErrorCode::kInvalidArgument,
          "lambda must lie in [0, 1]");
  adadelta.validate();
  require(init_range >= 0.0, ErrorCode::kInvalidArgument, "init_range must be >= 0");
  require(ss_prob >= 0.0 && ss_prob <= 1.0, ErrorCode::kInvalidArgument,
          "ss_prob must lie in [0, 1]");
  require(epochs >= 1, ErrorCode::kInvalidArgument, "epochs must be >= 1");
  require(batch_size >= 1, ErrorCode::kInvalidArgument, "batch_size must be >= 1");
  require(threads >= 1, ErrorCode::kInvalidArgument, "threads must be >= 1");
}

std::string epoch_record_header() {
  return "epoch\ttrain_loss\tdev_loss\tdev_ctc_cer\twallclock_s";
}

std::string format_epoch_record(const EpochRecord& r) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%zu\t%.6f\t%.6f\t%.4f\t%.2f", r.epoch, r.train_loss,
                r.dev_loss, r.dev_ctc_cer, r.wallclock_s);
  return buf;
}

double evaluate_loss(const Model& model, const std::vector<MixtureSample>& samples,
                     double lambda) {
  double total = 0.0;
  std::size_t tokens = 0;
  for (const auto& s : samples) {
    const MtlResult r = mtl_loss(model, s, lambda, HistorySource::teacher_forcing(), nullptr);
    if (r.skipped) continue;
    total += r.loss;
    tokens += s.num_reference_tokens();
  }
  return tokens == 0 ? 0.0 : total / static_cast<double>(tokens);
}

double greedy_ctc_cer(const Model& model, const std::vector<MixtureSample>& samples) {
  EvalReport report;
  for (const auto& s : samples) {
    const StreamSet streams = model.encoder().encode(model.params(), s.mixture);
    std::vector<TokenSeq> hyps;
    for (const auto& g : streams.streams) hyps.push_back(ctc_greedy_decode(model.ctc_logprobs(g)));
    report.add(s.id, hyps, s.references);
  }
  return report.cer();
}

TrainResult train(const ModelConfig& model_config, const TrainConfig& config,
                  const std::vector<MixtureSample>& train_set,
                  const std::vector<MixtureSample>& dev_set, const TrainHooks& hooks) {
  config.validate();
  require(!train_set.empty() && !dev_set.empty(), ErrorCode::kInvalidArgument,
          "train: empty train or dev set");
  const auto start = std::chrono::steady_clock::now();
  auto warn = [&](const std::string& msg) {
    if (hooks.warn) hooks.warn(msg);
  };

  Model model(model_config);
  model.init_uniform(config.init_range, derive_seed(config.seed, {0}));
  AdaDelta opt(model.params(), config.adadelta);
  Rng order_rng(derive_seed(config.seed, {1}));
  std::vector<std::size_t> order(train_set.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  TrainResult result;
  result.initial_dev_loss = evaluate_loss(model, dev_set, config.lambda);
  result.best = model;
  double best_dev = std::numeric_limits<double>::infinity();

  const std::size_t workers = std::min(config.threads, config.batch_size);
  std::vector<BatchPart> parts(workers);
  for (auto& p : parts) p.grads = GradStore(model.params());
  GradStore total(model.params());

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    order_rng.shuffle(order);
    EpochRecord rec;
    rec.epoch = epoch;
    double epoch_loss = 0.0;
    std::size_t epoch_tokens = 0;
    for (std::size_t b = 0; b < order.size(); b += config.batch_size) {
      const std::size_t e = std::min(order.size(), b + config.batch_size);
      const std::size_t n = e - b;
      const std::size_t used = std::min(workers, n);
      for (std::size_t w = 0; w < used; ++w) {
        parts[w].grads.zero();
        parts[w].loss = 0.0;
        parts[w].tokens = parts[w].skipped = 0;
        parts[w].skipped_ids.clear();
      }
      auto range = [&](std::size_t w) {
        return std::pair{b + n * w / used, b + n * (w + 1) / used};
      };
      if (used == 1) {
        run_part(model, config, train_set, order, b, e, epoch, parts[0]);
      } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < used; ++w) {
          const auto [lo, hi] = range(w);
          pool.emplace_back([&, w, lo = lo, hi = hi] {
            run_part(model, config, train_set, order, lo, hi, epoch, parts[w]);
          });
        }
        for (auto& t : pool) t.join();
      }
      total.zero();
      double batch_loss = 0.0;
      std::size_t tokens = 0;
      for (std::size_t w = 0; w < used; ++w) {
        total.add(parts[w].grads);
        batch_loss += parts[w].loss;
        tokens += parts[w].tokens;
        rec.skipped += parts[w].skipped;
        for (const auto& id : parts[w].skipped_ids)
          warn("epoch " + std::to_string(epoch) + ": skipped " + id +
               " (no CTC-feasible assignment)");
      }
      if (tokens == 0) continue;
      total.scale(1.0 / static_cast<double>(tokens));
      const double norm = total.global_norm();
      if (config.clip_norm > 0.0 && norm > config.clip_norm) total.scale(config.clip_norm / norm);
      if (!opt.step(model.params(), total)) {
        ++rec.rejected;
        warn("epoch " + std::to_string(epoch) + ": rejected update with non-finite gradient");
        continue;
      }
      epoch_loss += batch_loss;
      epoch_tokens += tokens;
    }
    rec.train_loss = epoch_tokens == 0 ? 0.0 : epoch_loss / static_cast<double>(epoch_tokens);
    rec.dev_loss = evaluate_loss(model, dev_set, config.lambda);
    require(std::isfinite(rec.dev_loss), ErrorCode::kNumeric,
            "training diverged: dev loss is " + std::to_string(rec.dev_loss) + " after epoch " +
                std::to_string(epoch));
    rec.dev_ctc_cer = greedy_ctc_cer(model, dev_set);
    rec.wallclock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (rec.dev_loss < best_dev) {
      best_dev = rec.dev_loss;
      result.best = model;
      result.best_epoch = epoch;
    }
    result.log.push_back(rec);
    if (hooks.on_epoch) hooks.on_epoch(rec);
  }
  result.last = std::move(model);
  return result;
}

}  // namespace mixasr
