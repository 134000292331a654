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

#include <cmath>
#include <cstring>

#include "doctest.h"
#include "mixasr/error.h"
#include "mixasr/training/mtl.h"
#include "mixasr/training/trainer.h"
#include "oracles.h"

using namespace mixasr;
using namespace mixasr::testing;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

Model tiny_model(std::uint64_t seed, AttentionMode mode = AttentionMode::kShared) {
  Model m(tiny_model_config(3, 4, mode));
  m.init_uniform(0.5, seed);
  return m;
}

TrainConfig quick_config() {
  TrainConfig c;
  c.epochs = 1;
  c.batch_size = 4;
  c.seed = 3;
  c.init_range = 0.3;
  return c;
}

}  // namespace

TEST_CASE("mtl loss endpoints of lambda") {
  const Model m = tiny_model(1);
  const MixtureSample s = tiny_sample(m.vocab(), 4);
  const auto tf = HistorySource::teacher_forcing();
  const MtlResult r0 = mtl_loss(m, s, 0.0, tf, nullptr);
  const MtlResult r1 = mtl_loss(m, s, 1.0, tf, nullptr);
  const MtlResult rh = mtl_loss(m, s, 0.5, tf, nullptr);
  CHECK(r0.loss == r0.att);
  CHECK(r1.loss == r1.ctc);
  CHECK(rh.loss == doctest::Approx(0.5 * (rh.att + rh.ctc)).epsilon(1e-14));
  CHECK(r0.ctc == r1.ctc);
  CHECK_THROWS_AS(mtl_loss(m, s, 1.5, tf, nullptr), Error);
}

TEST_CASE("ctc part of the mtl loss is the minimum over assignments") {
  const Model m = tiny_model(2);
  const MixtureSample s = tiny_sample(m.vocab(), 5);
  const MtlResult r = mtl_loss(m, s, 0.2, HistorySource::teacher_forcing(), nullptr);
  const double straight = r.ctc_matrix(0, 0) + r.ctc_matrix(1, 1);
  const double crossed = r.ctc_matrix(0, 1) + r.ctc_matrix(1, 0);
  CHECK(r.ctc == std::min(straight, crossed));
  CHECK(r.histories.size() == 2);
}

TEST_CASE("mtl loss is invariant to reference order") {
  const Model m = tiny_model(3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    MixtureSample s = tiny_sample(m.vocab(), 100 + seed);
    const MtlResult a = mtl_loss(m, s, 0.2, HistorySource::teacher_forcing(), nullptr);
    std::swap(s.references[0], s.references[1]);
    const MtlResult b = mtl_loss(m, s, 0.2, HistorySource::teacher_forcing(), nullptr);
    CHECK(std::abs(a.loss - b.loss) <= 1e-12);
  }
}

TEST_CASE("mtl gradient on the toy model") {
  for (double lambda : {0.0, 0.2, 1.0}) CHECK(mtl_grad_check(7, lambda).max_rel_error < 1e-3);
  CHECK(mtl_grad_check(8, 0.3, AttentionMode::kSpeakerParallel).max_rel_error < 1e-3);
}

TEST_CASE("infeasible samples are skipped") {
  const Model m = tiny_model(4);
  const Vocabulary& v = m.vocab();
  MixtureSample s;
  s.id = "short";
  s.mixture = Tensor::matrix(2, 4, 0.1);
  s.references = {{1, 1, 1}, {2, 2, 2}};
  GradStore g(m.params());
  const MtlResult r = mtl_loss(m, s, 0.2, HistorySource::teacher_forcing(), &g);
  CHECK(r.skipped);
  CHECK(g.global_norm() == 0.0);
  s.references = {{1}};
  CHECK_THROWS_AS(mtl_loss(m, s, 0.2, HistorySource::teacher_forcing(), nullptr), Error);
  (void)v;
}

TEST_CASE("uniform init bounds, determinism and zero range") {
  Model a(tiny_model_config()), b(tiny_model_config()), c(tiny_model_config());
  a.init_uniform(0.1, 9);
  b.init_uniform(0.1, 9);
  c.init_uniform(0.0, 9);
  CHECK(a.params() == b.params());
  const ParamStore& p = a.params();
  for (ParamId id = 0; id < p.size(); ++id) {
    const bool forget_bias = p.name(id).find("bias") != std::string::npos &&
                             (p.name(id).find("fwd") != std::string::npos ||
                              p.name(id).find("bwd") != std::string::npos ||
                              p.name(id).find("lstm") != std::string::npos);
    for (std::size_t k = 0; k < p.value(id).size(); ++k) {
      const double v = p.value(id)[k];
      const double z = c.params().value(id)[k];
      if (forget_bias && v == 1.0) {
        CHECK(z == 1.0);
        continue;
      }
      CHECK(std::abs(v) <= 0.1);
      CHECK(z == 0.0);
    }
  }
  b.init_uniform(0.1, 10);
  CHECK_FALSE(a.params() == b.params());
}

TEST_CASE("model save and load") {
  const Model m = tiny_model(5, AttentionMode::kSpeakerParallel);
  const auto dir = scratch_dir("model");
  m.save(dir / "m.bin");
  const Model back = Model::load(dir / "m.bin");
  CHECK(back.config() == m.config());
  CHECK(back.params() == m.params());
}

TEST_CASE("one epoch produces one record") {
  const Vocabulary v = Vocabulary::with_default_symbols(3);
  const auto train_set = tiny_set(v, 10, 1);
  const auto dev_set = tiny_set(v, 3, 2);
  std::size_t seen = 0;
  TrainHooks hooks;
  hooks.on_epoch = [&](const EpochRecord& r) {
    ++seen;
    CHECK(r.epoch == 1);
  };
  const TrainResult r = train(tiny_model_config(), quick_config(), train_set, dev_set, hooks);
  CHECK(seen == 1);
  REQUIRE(r.log.size() == 1);
  CHECK(std::isfinite(r.log[0].train_loss));
  CHECK(std::isfinite(r.log[0].dev_loss));
  CHECK(r.log[0].dev_ctc_cer >= 0.0);
  CHECK(format_epoch_record(r.log[0]).rfind("1\t", 0) == 0);
  CHECK(epoch_record_header() == "epoch\ttrain_loss\tdev_loss\tdev_ctc_cer\twallclock_s");
}

TEST_CASE("training is deterministic and thread count does not change the sums' order") {
  const Vocabulary v = Vocabulary::with_default_symbols(3);
  const auto train_set = tiny_set(v, 8, 3);
  const auto dev_set = tiny_set(v, 2, 4);
  TrainConfig c = quick_config();
  c.epochs = 2;
  const TrainResult a = train(tiny_model_config(), c, train_set, dev_set);
  const TrainResult b = train(tiny_model_config(), c, train_set, dev_set);
  CHECK(a.last.params() == b.last.params());
  for (std::size_t e = 0; e < 2; ++e) CHECK(same_bits(a.log[e].dev_loss, b.log[e].dev_loss));
  // One worker per sample: gradients are summed in worker order, which only
  // regroups the additions.
  c.threads = 4;
  const TrainResult t = train(tiny_model_config(), c, train_set, dev_set);
  for (std::size_t e = 0; e < 2; ++e)
    CHECK(t.log[e].dev_loss == doctest::Approx(a.log[e].dev_loss).epsilon(1e-9));
}

TEST_CASE("scheduled sampling at p = 0 reproduces teacher forcing bitwise") {
  const Vocabulary v = Vocabulary::with_default_symbols(3);
  const auto train_set = tiny_set(v, 8, 5);
  const auto dev_set = tiny_set(v, 2, 6);
  TrainConfig c = quick_config();
  c.epochs = 2;
  c.scheduled_sampling = true;
  c.ss_prob = 0.0;
  const TrainResult ss = train(tiny_model_config(), c, train_set, dev_set);
  c.scheduled_sampling = false;
  const TrainResult tf = train(tiny_model_config(), c, train_set, dev_set);
  for (std::size_t e = 0; e < 2; ++e) {
    CHECK(same_bits(ss.log[e].train_loss, tf.log[e].train_loss));
    CHECK(same_bits(ss.log[e].dev_loss, tf.log[e].dev_loss));
  }
  CHECK(ss.last.params() == tf.last.params());
}

TEST_CASE("dev loss drops on the toy task") {
  const Vocabulary v = Vocabulary::with_default_symbols(3);
  const auto train_set = tiny_set(v, 10, 7);
  TrainConfig c = quick_config();
  c.epochs = 20;
  c.batch_size = 2;
  const TrainResult r = train(tiny_model_config(), c, train_set, train_set);
  CHECK(r.log.back().dev_loss < r.initial_dev_loss);
  CHECK(r.best_epoch >= 1);
  double best = 1e300;
  for (const auto& e : r.log) best = std::min(best, e.dev_loss);
  CHECK(evaluate_loss(r.best, train_set, c.lambda) == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("train config validation") {
  TrainConfig c;
  c.lambda = -0.1;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.batch_size = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.ss_prob = 2;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.adadelta.rho = 1.0;
  CHECK_THROWS_AS(c.validate(), Error);
  const Vocabulary v = Vocabulary::with_default_symbols(3);
  CHECK_THROWS_AS(train(tiny_model_config(), quick_config(), {}, tiny_set(v, 1, 1)), Error);
}
