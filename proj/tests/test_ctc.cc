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

#include "doctest.h"
#include "mixasr/ctc/ctc.h"
#include "mixasr/error.h"
#include "oracles.h"

using namespace mixasr;
using namespace mixasr::testing;

TEST_CASE("ctc on uniform frames: label a over two frames costs ln 3") {
  Tensor lp = Tensor::matrix(2, 3, std::log(1.0 / 3.0));
  CHECK(ctc_nll(lp, {1}) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
  // Empty label: only the all-blank path.
  CHECK(ctc_nll(lp, {}) == doctest::Approx(2 * std::log(3.0)).epsilon(1e-14));
  CHECK(ctc_brute(lp, {1}) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
}

TEST_CASE("ctc matches brute-force path enumeration") {
  Rng rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t T = 1 + rng.uniform_int(6);
    const std::size_t C = 2 + rng.uniform_int(3);
    const Tensor lp = random_logprobs(rng, T, C);
    const TokenSeq labels = random_labels(rng, rng.uniform_int(4), C - 1);
    const double fb = ctc_nll(lp, labels);
    const double bf = ctc_brute(lp, labels);
    if (std::isinf(bf)) {
      CHECK(std::isinf(fb));
      CHECK(fb > 0);
    } else {
      CHECK(std::abs(fb - bf) < 1e-9);
    }
  }
}

TEST_CASE("ctc minimum frames and infeasible alignments") {
  CHECK(ctc_min_frames({}) == 0);
  CHECK(ctc_min_frames({1, 2}) == 2);
  CHECK(ctc_min_frames({1, 1}) == 3);
  CHECK(ctc_min_frames({1, 1, 1, 2, 2}) == 8);
  Rng rng(1);
  const Tensor lp = random_logprobs(rng, 2, 3);
  const CtcResult r = ctc_loss(lp, {1, 1});
  CHECK(std::isinf(r.nll));
  CHECK(r.nll > 0);
  for (double g : r.grad.values()) CHECK(g == 0.0);
  CHECK(ctc_nll(lp, {1, 2}) < 1e300);
}

TEST_CASE("ctc with zero frames") {
  const Tensor lp = Tensor::matrix(0, 3);
  CHECK(ctc_nll(lp, {}) == 0.0);
  CHECK(std::isinf(ctc_nll(lp, {1})));
}

TEST_CASE("ctc rejects bad labels and shapes") {
  Rng rng(1);
  const Tensor lp = random_logprobs(rng, 3, 3);
  CHECK_THROWS_AS(ctc_loss(lp, {0}), Error);
  CHECK_THROWS_AS(ctc_loss(lp, {3}), Error);
  CHECK_THROWS_AS(ctc_brute(random_logprobs(rng, 20, 4), {1}), Error);
}

TEST_CASE("ctc gradient w.r.t. logits") {
  Rng rng(77);
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t T = 2 + rng.uniform_int(5);
    const TokenSeq labels = random_labels(rng, 1 + rng.uniform_int(T / 2), 3);
    if (ctc_min_frames(labels) > T) continue;
    const auto r = ctc_logit_grad_check(rng, T, 4, labels);
    CHECK(r.max_rel_error < 1e-6);
  }
}

TEST_CASE("ctc gradient rows sum to -1 against normalized inputs") {
  // d nll / d logp(t, k) = -gamma(t, k), a posterior over classes per frame.
  Rng rng(8);
  const Tensor lp = random_logprobs(rng, 6, 4);
  const CtcResult r = ctc_loss(lp, {1, 3, 1});
  for (std::size_t t = 0; t < 6; ++t) {
    double s = 0.0;
    for (double g : r.grad.row(t)) s += g;
    CHECK(s == doctest::Approx(-1.0).epsilon(1e-12));
  }
}

TEST_CASE("collapse and greedy decoding") {
  CHECK(ctc_collapse({0, 1, 1, 0, 1, 2, 2, 0}) == TokenSeq{1, 1, 2});
  CHECK(ctc_collapse({0, 0}).empty());
  Tensor lp = Tensor::matrix(4, 3, -5.0);
  lp(0, 2) = lp(1, 2) = lp(2, 0) = lp(3, 2) = -0.01;
  CHECK(ctc_greedy_decode(lp) == TokenSeq{2, 2});
}

TEST_CASE("pit picks the cheaper assignment and breaks ties lexicographically") {
  Tensor m({2, 2}, {5.0, 1.0, 2.0, 7.0});
  Permutation p = pit_assign(m);
  CHECK(p.assignment == std::vector<std::size_t>{1, 0});
  CHECK(p.total == 3.0);
  CHECK(p.pair_losses == std::vector<double>{1.0, 2.0});
  m = Tensor({2, 2}, {1.0, 1.0, 1.0, 1.0});
  CHECK(pit_assign(m).assignment == std::vector<std::size_t>{0, 1});
  const double inf = std::numeric_limits<double>::infinity();
  m = Tensor({2, 2}, {inf, 1.0, 2.0, inf});
  CHECK(pit_assign(m).assignment == std::vector<std::size_t>{1, 0});
  m = Tensor({2, 2}, {inf, inf, inf, inf});
  CHECK(std::isinf(pit_assign(m).total));
  CHECK_THROWS_AS(pit_assign(Tensor::matrix(2, 3)), Error);
}

TEST_CASE("pit is covariant under row and column permutations") {
  Rng rng(12);
  for (std::size_t S : {2, 3, 4}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Tensor m = random_matrix(rng, S, S, 10.0);
      std::vector<std::size_t> rows(S), cols(S);
      std::iota(rows.begin(), rows.end(), 0);
      std::iota(cols.begin(), cols.end(), 0);
      rng.shuffle(rows);
      rng.shuffle(cols);
      Tensor pm = Tensor::matrix(S, S);
      for (std::size_t i = 0; i < S; ++i)
        for (std::size_t j = 0; j < S; ++j) pm(i, j) = m(rows[i], cols[j]);
      const Permutation a = pit_assign(m), b = pit_assign(pm);
      CHECK(a.total == doctest::Approx(b.total).epsilon(1e-14));
      // Continuous random entries: the optimum is unique, so it maps over.
      for (std::size_t i = 0; i < S; ++i) CHECK(cols[b.assignment[i]] == a.assignment[rows[i]]);
    }
  }
}
