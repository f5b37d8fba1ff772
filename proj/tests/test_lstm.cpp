/*
 * Copyright 2026 The ltwkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <cmath>
#include <filesystem>
#include <numeric>
#include <random>

#include "doctest.h"
#include "error.hpp"
#include "fixtures.hpp"
#include "lstm.hpp"
#include "oracles.hpp"
#include "random.hpp"

using namespace ltw;
using oracle::Vec;

namespace {

double sum(const Vec& p) { return std::accumulate(p.begin(), p.end(), 0.0); }

}  // namespace

TEST_SUITE("lstm") {
  TEST_CASE("discretization") {
    CHECK(discretize(Vec{0, 5, 10}, 2) == Vec{0, 0.5, 1});
    CHECK(discretize(Vec{3, 3, 3}, 100) == Vec{0, 0, 0});
    auto d = discretize(Vec{-1, 0.333, 2}, 100);
    CHECK(d.front() == 0.0);
    CHECK(d.back() == 1.0);
    CHECK(d[1] == 0.44);
    CHECK_THROWS_AS(discretize(Vec{1, 2}, 0), Error);
  }

  TEST_CASE("zero parameters give a uniform distribution") {
    auto p = LstmParams::zeros(5, 4);
    auto f = forward(p, Vec{0.1, 0.9, 0.4});
    for (double v : f.prob) CHECK(v == doctest::Approx(0.25).epsilon(1e-15));
  }

  TEST_CASE("probabilities are a distribution") {
    Rng rng(2);
    auto p = LstmParams::uniform(6, 13, 0.5, rng);
    std::mt19937_64 gen(2);
    for (int t = 0; t < 20; ++t) {
      auto f = forward(p, oracle::random_vec(gen, 50, 0, 1));
      CHECK(f.prob.size() == 13);
      CHECK(sum(f.prob) == doctest::Approx(1.0).epsilon(1e-9));
      for (double v : f.prob) CHECK((v > 0.0 && v < 1.0));
    }
  }

  TEST_CASE("loss closed forms") {
    auto p = LstmParams::zeros(3, 13);
    const Vec x{0.2, 0.4};
    std::vector<LabeledSequence> batch{{x, 0}, {x, 5}, {x, 12}};
    CHECK(loss(p, batch) == doctest::Approx(3 * std::log(13.0)));
    auto two = LstmParams::zeros(3, 2);
    std::vector<LabeledSequence> one{{x, 1}};
    CHECK(loss(two, one) == doctest::Approx(std::log(2.0)));
    two.head_b(1) = 40.0;
    CHECK(loss(two, one) < 1e-15);
  }

  TEST_CASE("backward matches finite differences") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      Rng rng(seed);
      auto p = LstmParams::uniform(4, 3, 0.5, rng);
      std::mt19937_64 gen(seed);
      std::vector<std::vector<double>> xs{oracle::random_vec(gen, 5, 0, 1), oracle::random_vec(gen, 5, 0, 1)};
      CHECK(fixtures::worst_gradient_error(p, xs, {0, 2}) < 1e-4);
    }
  }

  TEST_CASE("backward loss and accuracy agree with the forward pass") {
    Rng rng(4);
    auto p = LstmParams::uniform(3, 3, 0.5, rng);
    std::mt19937_64 gen(4);
    std::vector<std::vector<double>> xs;
    std::vector<LabeledSequence> batch;
    for (int i = 0; i < 6; ++i) xs.push_back(oracle::random_vec(gen, 7, 0, 1));
    std::size_t correct = 0;
    for (int i = 0; i < 6; ++i) {
      batch.push_back({xs[static_cast<std::size_t>(i)], i % 3});
      correct += argmax(forward(p, xs[static_cast<std::size_t>(i)]).prob) == static_cast<std::size_t>(i % 3);
    }
    auto g = backward(p, batch);
    CHECK(g.loss == doctest::Approx(loss(p, batch)));
    CHECK(g.correct == correct);
  }

  TEST_CASE("head bias gradient sums to zero") {
    auto p = LstmParams::zeros(4, 3);
    const Vec x{0.3, 0.6, 0.9};
    std::vector<LabeledSequence> batch{{x, 0}, {x, 1}, {x, 2}};
    auto g = backward(p, batch);
    CHECK(g.grad.head_b.sum() == doctest::Approx(0.0).scale(1.0));
  }

  TEST_CASE("input weights get no gradient from an all-zero input") {
    Rng rng(5);
    auto p = LstmParams::uniform(4, 3, 0.3, rng);
    const Vec x(6, 0.0);
    std::vector<LabeledSequence> batch{{x, 1}};
    auto g = backward(p, batch);
    CHECK(g.grad.candidate.input_w.isZero(0.0));
    CHECK(g.grad.input.input_w.isZero(0.0));
    CHECK(g.grad.forget.input_w.isZero(0.0));
    CHECK(g.grad.output.input_w.isZero(0.0));
    CHECK_FALSE(g.grad.head_b.isZero(0.0));
  }

  TEST_CASE("training memorizes a separable toy set") {
    auto data = fixtures::toy_shapes(20, 24, 9);
    TrainConfig cfg;
    cfg.hidden = 8;
    cfg.batch_size = 20;
    cfg.max_epochs = 200;
    cfg.learning_rate = 0.05;
    cfg.seed = 3;
    auto model = train(data, cfg);
    CHECK(model.trace.size() == 200);
    CHECK(model.trace.back().train_acc == 1.0);
    for (std::size_t i = 0; i < data.size(); ++i) CHECK(predict(model, data[i].values()) == data.label_of(i));
  }

  TEST_CASE("training is deterministic in the seed") {
    auto data = fixtures::toy_shapes(12, 16, 1);
    TrainConfig cfg;
    cfg.hidden = 4;
    cfg.batch_size = 4;
    cfg.max_epochs = 5;
    cfg.seed = 11;
    auto a = train(data, cfg), b = train(data, cfg);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t e = 0; e < a.trace.size(); ++e) {
      CHECK(a.trace[e].loss == b.trace[e].loss);
      CHECK(a.trace[e].train_acc == b.trace[e].train_acc);
    }
    cfg.seed = 12;
    auto c = train(data, cfg);
    CHECK(c.trace.front().loss != a.trace.front().loss);
  }

  TEST_CASE("configuration is validated") {
    auto data = fixtures::toy_shapes(6, 8, 1);
    TrainConfig cfg;
    cfg.batch_size = 7;
    CHECK_THROWS_AS(train(data, cfg), Error);
    cfg = TrainConfig{};
    cfg.batch_size = 3;
    cfg.learning_rate = 0.0;
    CHECK_THROWS_AS(train(data, cfg), Error);
    cfg.learning_rate = 0.1;
    cfg.hidden = 0;
    CHECK_THROWS_AS(train(data, cfg), Error);
  }

  TEST_CASE("runaway learning rate reports divergence") {
    auto data = fixtures::toy_shapes(12, 200, 1);
    TrainConfig cfg;
    cfg.hidden = 8;
    cfg.batch_size = 2;
    cfg.max_epochs = 20;
    cfg.learning_rate = 1e6;
    try {
      train(data, cfg);
      FAIL("expected divergence");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Diverged);
    }
  }

  TEST_CASE("checkpoint round trip is exact") {
    auto data = fixtures::toy_shapes(9, 12, 2);
    TrainConfig cfg;
    cfg.hidden = 3;
    cfg.batch_size = 3;
    cfg.max_epochs = 3;
    auto model = train(data, cfg);
    auto back = parse_checkpoint(format_checkpoint(model));
    CHECK(back.levels == model.levels);
    CHECK(back.seed == model.seed);
    CHECK(back.epochs == model.epochs);
    CHECK(back.params.head_w == model.params.head_w);
    CHECK(back.params.forget.recurrent_w == model.params.forget.recurrent_w);
    for (std::size_t i = 0; i < data.size(); ++i) CHECK(predict_prob(back, data[i].values()) == predict_prob(model, data[i].values()));
    auto path = (std::filesystem::temp_directory_path() / "ltwkit_ckpt_test.txt").string();
    save_checkpoint(model, path);
    CHECK(load_checkpoint(path).params.output.bias == model.params.output.bias);
    std::filesystem::remove(path);
  }

  TEST_CASE("corrupt checkpoints are parse errors") {
    CHECK_THROWS_AS(parse_checkpoint("not a checkpoint"), Error);
    CHECK_THROWS_AS(parse_checkpoint("ltwkit-lstm 1\nhidden 2\n"), Error);
    LstmModel model;
    model.params = LstmParams::zeros(2, 2);
    auto text = format_checkpoint(model);
    CHECK_NOTHROW(parse_checkpoint(text));
    CHECK_THROWS_AS(parse_checkpoint(text.substr(0, text.size() - 6)), Error);
  }
}
